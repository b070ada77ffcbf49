"""Hot loops: bracket closure and piecewise-constant propagation.

Each kernel has two implementations with the same contract:

* a numba ``@njit`` version (explicit loops, compiled and cached on disk);
* a pure-numpy version (vectorized where the algorithm allows it).

``QCA_NUMBA=0`` in the environment selects the numpy path; it is also used
whenever numba cannot be imported. The choice is read on every call so tests
can flip it with ``monkeypatch.setenv``.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


def use_numba():
    """True when the compiled kernels are active."""
    flag = os.environ.get("QCA_NUMBA", "1").strip().lower()
    return HAVE_NUMBA and flag not in ("0", "false", "no", "off")


# --------------------------------------------------------------------------
# bracket closure
# --------------------------------------------------------------------------

@njit(cache=True)
def _hs_nb(a, b):
    s = 0.0
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            s += a[i, j].real * b[i, j].real + a[i, j].imag * b[i, j].imag
    return s


@njit(cache=True)
def _orthogonalize_nb(v, basis, dim):
    # classical Gram-Schmidt, applied twice
    w = v.copy()
    for _ in range(2):
        coef = np.empty(dim)
        for k in range(dim):
            coef[k] = _hs_nb(basis[k], w)
        for k in range(dim):
            w -= coef[k] * basis[k]
    return w


@njit(cache=True)
def closure_numba(gens, tol):
    m = gens.shape[0]
    n = gens.shape[1]
    max_dim = n * n
    basis = np.zeros((max_dim, n, n), dtype=np.complex128)
    dim = 0
    for g in range(m):
        nrm = np.sqrt(_hs_nb(gens[g], gens[g]))
        if nrm == 0.0 or dim == max_dim:
            continue
        w = _orthogonalize_nb(gens[g] / nrm, basis, dim)
        r = np.sqrt(_hs_nb(w, w))
        if r > tol * 2.0:
            basis[dim] = w / r
            dim += 1

    cap = max_dim * max_dim
    qa = np.empty(cap, dtype=np.int64)
    qb = np.empty(cap, dtype=np.int64)
    head = 0
    tail = 0
    for i in range(dim):
        for j in range(i):
            qa[tail] = i
            qb[tail] = j
            tail += 1

    while head < tail and dim < max_dim:
        a = basis[qa[head]]
        b = basis[qb[head]]
        head += 1
        x = a @ b - b @ a
        bn = np.sqrt(_hs_nb(x, x))
        w = _orthogonalize_nb(x, basis, dim)
        r = np.sqrt(_hs_nb(w, w))
        if r > tol * (1.0 + bn):
            basis[dim] = w / r
            for j in range(dim):
                qa[tail] = dim
                qb[tail] = j
                tail += 1
            dim += 1
    return basis[:dim].copy()


def closure_numpy(gens, tol):
    gens = np.asarray(gens, dtype=np.complex128)
    n = gens.shape[1]
    max_dim = n * n
    basis = np.zeros((max_dim, n, n), dtype=np.complex128)
    # real coordinates of the basis, kept in sync with ``basis``
    coords = np.zeros((max_dim, 2 * n * n))
    dim = 0

    def orth(x):
        v = np.concatenate([x.real.ravel(), x.imag.ravel()])
        for _ in range(2):
            q = coords[:dim]
            v = v - q.T @ (q @ v)
        return v

    def append(v, r):
        nonlocal dim
        v = v / r
        coords[dim] = v
        basis[dim] = (v[: n * n] + 1j * v[n * n:]).reshape(n, n)
        dim += 1

    for g in gens:
        nrm = np.linalg.norm(g)
        if nrm == 0.0 or dim == max_dim:
            continue
        v = orth(g / nrm)
        r = np.linalg.norm(v)
        if r > tol * 2.0:
            append(v, r)

    # FIFO of (a, [b0, b1, ...]); pairs in a row are handled in order, and
    # their brackets are evaluated together since basis vectors never change
    queue = [(i, list(range(i))) for i in range(1, dim)]
    head = 0
    while head < len(queue) and dim < max_dim:
        a, bs = queue[head]
        head += 1
        brackets = basis[a] @ basis[bs] - basis[bs] @ basis[a]
        for x in brackets:
            if dim == max_dim:
                break
            bn = np.linalg.norm(x)
            v = orth(x)
            r = np.linalg.norm(v)
            if r > tol * (1.0 + bn):
                new = dim
                append(v, r)
                if new > 0:
                    queue.append((new, list(range(new))))
    return basis[:dim].copy()


def closure(gens, tol=1e-9):
    """Orthonormal basis (shape ``(d, n, n)``) of the Lie algebra generated by ``gens``."""
    gens = np.ascontiguousarray(gens, dtype=np.complex128)
    if use_numba():
        return closure_numba(gens, float(tol))
    return closure_numpy(gens, float(tol))


# --------------------------------------------------------------------------
# piecewise-constant propagation
# --------------------------------------------------------------------------

@njit(cache=True)
def propagate_numba(drift, controls, amps, dts):
    n = drift.shape[0]
    m = controls.shape[0]
    u = np.eye(n, dtype=np.complex128)
    for s in range(dts.shape[0]):
        gen = drift.copy()
        for k in range(m):
            gen += amps[s, k] * controls[k]
        # gen*dt = i*K with K Hermitian
        herm = -1j * gen * dts[s]
        herm = 0.5 * (herm + herm.conj().T)
        w, v = np.linalg.eigh(herm)
        step = (v * np.exp(1j * w)) @ v.conj().T
        u = step @ u
    return u


def propagate_numpy(drift, controls, amps, dts):
    n = drift.shape[0]
    out = np.eye(n, dtype=np.complex128)
    if len(dts) == 0:
        return out
    gens = drift[None] + np.einsum("sk,kij->sij", amps, controls)
    herm = -1j * gens * dts[:, None, None]
    herm = 0.5 * (herm + herm.conj().transpose(0, 2, 1))
    w, v = np.linalg.eigh(herm)
    steps = (v * np.exp(1j * w)[:, None, :]) @ v.conj().transpose(0, 2, 1)
    for step in steps:
        out = step @ out
    return out


def propagate(drift, controls, amps, dts):
    """Time-ordered product of segment exponentials; later segments act on the left."""
    drift = np.ascontiguousarray(drift, dtype=np.complex128)
    controls = np.ascontiguousarray(controls, dtype=np.complex128)
    amps = np.ascontiguousarray(amps, dtype=np.float64).reshape(len(dts), controls.shape[0])
    dts = np.ascontiguousarray(dts, dtype=np.float64)
    if use_numba():
        return propagate_numba(drift, controls, amps, dts)
    return propagate_numpy(drift, controls, amps, dts)
