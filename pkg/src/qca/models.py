"""Builtin systems and matrix constructions.

Conventions: spin-1/2 operators are ``sigma/2`` and a Hamiltonian ``H``
enters the dynamics as the skew-Hermitian matrix ``iH``.
"""

from dataclasses import dataclass, field

import numpy as np

from .lie import LieBasis
from .matcore import DensityMatrix, haar_random_unitary, validate_skew

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}

FAMILIES = ("single-spin", "two-spin", "example-sp2", "example-orbit")


class ParameterError(ValueError):
    """Missing or invalid model parameters."""


@dataclass(frozen=True, eq=False)
class SystemModel:
    """Drift ``A`` and controls ``B_1..B_m`` of a bilinear system."""

    drift: np.ndarray = field(repr=False)
    controls: tuple = field(repr=False)
    label: str = ""

    def __post_init__(self):
        drift = validate_skew(self.drift, "drift")
        if len(self.controls) == 0:
            raise ParameterError("a system needs at least one control")
        controls = tuple(validate_skew(b, f"control {k}") for k, b in enumerate(self.controls))
        n = drift.shape[0]
        if any(b.shape != (n, n) for b in controls):
            raise ParameterError("drift and controls have mixed dimensions")
        for m in (drift, *controls):
            m.setflags(write=False)
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "controls", controls)

    @property
    def n(self):
        return self.drift.shape[0]

    @property
    def m(self):
        return len(self.controls)

    def generators(self):
        return [self.drift, *self.controls]

    def conjugate(self, u):
        """The same system in the basis changed by unitary ``u``."""
        uh = u.conj().T
        return SystemModel(u @ self.drift @ uh, tuple(u @ b @ uh for b in self.controls), self.label)


def single_spin(omega=1.0, controls="xy"):
    """Spin 1/2 with a z drift of frequency ``omega`` and transverse controls."""
    ctrl = tuple(1j * PAULI[c] / 2 for c in controls)
    return SystemModel(1j * omega * SZ / 2, ctrl, f"single-spin omega={omega:g}")


def two_spin(J=1.0, gamma1=1.0, gamma2=1.1, coupling="ising"):
    """Two coupled spins 1/2 driven by a common field along x, y, z.

    Parameters
    ----------
    J : float
        Coupling strength; must be nonzero.
    gamma1, gamma2 : float
        Gyromagnetic factors of the two spins.
    coupling : {"ising", "isotropic"}
        ``zz`` coupling, or ``xx + yy + zz``.
    """
    if J == 0:
        raise ParameterError("coupling strength J must be nonzero")
    if coupling == "ising":
        h = np.kron(SZ, SZ)
    elif coupling == "isotropic":
        h = sum(np.kron(p, p) for p in (SX, SY, SZ))
    else:
        raise ParameterError(f"unknown coupling {coupling!r}")
    drift = 1j * J * h / 4
    ctrl = tuple(1j * (gamma1 * np.kron(p, I2) + gamma2 * np.kron(I2, p)) / 2 for p in (SX, SY, SZ))
    return SystemModel(drift, ctrl, f"two-spin {coupling} J={J:g} g1={gamma1:g} g2={gamma2:g}")


def symplectic_j(k):
    """The standard antisymmetric form ``[[0, I_k], [-I_k, 0]]``."""
    z, i = np.zeros((k, k)), np.eye(k)
    return np.block([[z, i], [-i, z]]).astype(complex)


def standard_sp_basis(k):
    """Orthonormal basis of sp(k) in u(2k): ``[[A, B], [-conj(B), conj(A)]]``,
    ``A`` skew-Hermitian, ``B`` complex symmetric. Dimension ``k(2k+1)``."""
    if k < 1:
        raise ParameterError("k must be positive")
    n = 2 * k
    mats = []

    def put(a, b):
        x = np.zeros((n, n), complex)
        x[:k, :k], x[:k, k:] = a, b
        x[k:, :k], x[k:, k:] = -b.conj(), a.conj()
        mats.append(x)

    zero = np.zeros((k, k), complex)
    for i in range(k):
        for j in range(i, k):
            for c in (1.0, 1j):
                a = np.zeros((k, k), complex)
                a[i, j], a[j, i] = c, -np.conj(c)
                if i != j or c == 1j:
                    put(a, zero)
                b = np.zeros((k, k), complex)
                b[i, j] = b[j, i] = c
                put(zero, b)
    return LieBasis.from_matrices(mats)


def example_sp2_basis():
    """The 10-dimensional algebra of 4x4 matrices

    ``[[L + Z, T + C], [-conj(T) + conj(C), -L + Z^T]]``

    with ``L`` diagonal imaginary, ``T`` diagonal, ``Z`` off-diagonal
    skew-Hermitian and ``C`` off-diagonal antisymmetric (all 2x2).
    """
    mats = []

    def put(l=0, z=0, t=0, c=0):
        l, z, t, c = (np.broadcast_to(np.asarray(b, complex), (2, 2)) for b in (l, z, t, c))
        mats.append(np.block([[l + z, t + c], [-t.conj() + c.conj(), -l + z.T]]))

    for p in range(2):
        l = np.zeros((2, 2), complex)
        l[p, p] = 1j
        put(l=l)
        for v in (1.0, 1j):
            t = np.zeros((2, 2), complex)
            t[p, p] = v
            put(t=t)
    for v in (1.0, 1j):
        put(z=np.array([[0, v], [-np.conj(v), 0]]))
        put(c=np.array([[0, v], [-v, 0]]))
    return LieBasis.from_matrices(mats)


def example_orbit_pair(n=4, v=None, seed=0, max_tries=100):
    """Density matrices ``D`` (commuting with ``J``) and ``D'`` (not ``J``-real).

    ``D = (|v><v| + |w><w|)/2`` with ``w = (-v2; v1)`` for a real unit vector
    ``v = (v1; v2)``. ``D'`` is built the same way from two random orthonormal
    complex vectors, resampled until ``||D'J - J conj(D')|| > 1e-3``.

    Returns
    -------
    (DensityMatrix, DensityMatrix, ndarray)
        ``D``, ``D'`` and ``J``.
    """
    if n % 2 or n <= 2:
        raise ParameterError("n must be even and greater than 2")
    k = n // 2
    v = np.eye(n)[0] if v is None else np.asarray(v, dtype=float)
    if v.shape != (n,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ParameterError("v must be a real unit vector of length n")
    w = np.concatenate([-v[k:], v[:k]])
    d = 0.5 * (np.outer(v, v) + np.outer(w, w))
    j = symplectic_j(k)
    for attempt in range(max_tries):
        u = haar_random_unitary(n, seed=[seed, attempt])
        a, b = u[:, 0], u[:, 1]
        dp = 0.5 * (np.outer(a, a.conj()) + np.outer(b, b.conj()))
        if np.linalg.norm(dp @ j - j @ dp.conj()) > 1e-3:
            return DensityMatrix(d), DensityMatrix(dp), j
    raise RuntimeError("no witness D' found; raise max_tries")


def sp_element(k, rng):
    """Random element of sp(k) (Gaussian coefficients in the standard basis)."""
    basis = standard_sp_basis(k)
    return np.einsum("a,aij->ij", rng.standard_normal(basis.dim), basis.elements)


def build(family, **params):
    """Construct a builtin system by family name.

    ``example-sp2`` and ``example-orbit`` have zero drift and use the
    algebra's basis as controls (the latter is the standard sp(n/2)).
    """
    if family == "single-spin":
        return single_spin(params.get("omega", 1.0), params.get("controls", "xy"))
    if family == "two-spin":
        missing = [p for p in ("J", "gamma1", "gamma2") if params.get(p) is None]
        if missing:
            raise ParameterError(f"two-spin requires {', '.join(missing)}")
        return two_spin(params["J"], params["gamma1"], params["gamma2"], params.get("coupling", "ising"))
    if family == "example-sp2":
        basis = example_sp2_basis()
        return SystemModel(np.zeros((4, 4), complex), tuple(basis.elements), "example-sp2")
    if family == "example-orbit":
        n = int(params.get("n") or 4)
        if n % 2 or n <= 2:
            raise ParameterError("example-orbit needs an even n > 2")
        basis = standard_sp_basis(n // 2)
        return SystemModel(np.zeros((n, n), complex), tuple(basis.elements), f"sp({n // 2})")
    raise ParameterError(f"unknown model family {family!r}; choose from {', '.join(FAMILIES)}")
