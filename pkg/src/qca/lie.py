"""Real Lie subalgebras of u(n): closure, centralizers, invariant forms."""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement

import numpy as np

from . import _kernels
from .matcore import (
    ConditioningError,
    ShapeError,
    ValidationError,
    as_density,
    as_matrix,
    from_coords,
    rank_threshold,
    rank_tol,
    to_coords,
    validate_skew,
)

#: Relative residual allowed for span membership (generators, brackets, iI).
SPAN_TOL = 1e-8
#: Eigenvalues closer than this are treated as one degenerate eigenvalue.
CLUSTER_TOL = 1e-8
#: Gaps in ``(CLUSTER_TOL, CONDITION_GAP)`` are refused as ill-conditioned.
CONDITION_GAP = 1e-6


@dataclass(frozen=True, eq=False)
class LieBasis:
    """Hilbert-Schmidt orthonormal basis of a real subspace of u(n).

    ``closed`` records that the span is known to be bracket-closed, either
    because it came out of :func:`lie_closure` or because it was checked.
    """

    n: int
    elements: np.ndarray = field(repr=False)
    closed: bool = False

    def __post_init__(self):
        els = np.asarray(self.elements, dtype=np.complex128)
        if els.ndim != 3 or els.shape[1:] != (self.n, self.n):
            raise ShapeError(f"elements must have shape (d, {self.n}, {self.n})")
        els = els.copy()
        els.setflags(write=False)
        object.__setattr__(self, "elements", els)

    @property
    def dim(self):
        return self.elements.shape[0]

    @property
    def coords(self):
        return to_coords(self.elements)

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.elements)

    def residual(self, x):
        """Distance from ``x`` to the span."""
        v = to_coords(np.asarray(x, dtype=np.complex128)[None])[0]
        q = self.coords
        for _ in range(2):
            v = v - q.T @ (q @ v)
        return float(np.linalg.norm(v))

    def contains(self, x, tol=SPAN_TOL):
        return bool(self.residual(x) <= tol * (1.0 + np.linalg.norm(x)))

    def is_traceless(self, tol=1e-9):
        return bool(np.all(np.abs(np.trace(self.elements, axis1=1, axis2=2)) <= tol))

    @classmethod
    def from_matrices(cls, mats, check=True):
        """Orthonormalize the real span of skew-Hermitian ``mats`` (via SVD).

        With ``check=True`` the ``closed`` flag is set by testing every
        pairwise bracket for membership in the span.
        """
        mats = [validate_skew(m) for m in mats]
        if not mats:
            raise ValueError("need at least one matrix")
        n = mats[0].shape[0]
        if any(m.shape != (n, n) for m in mats):
            raise ShapeError("matrices have mixed dimensions")
        a = to_coords(np.stack(mats))
        _, sv, vt = np.linalg.svd(a, full_matrices=False)
        if sv[0] == 0.0:
            raise ValueError("matrices span the zero subspace")
        r = int(np.sum(sv > rank_threshold(sv, a.shape)))
        basis = cls(n, from_coords(vt[:r], n))
        if check:
            basis = cls(n, basis.elements, closed=is_closed(basis))
        return basis


def is_closed(basis, tol=SPAN_TOL):
    """True if every bracket of basis elements lies in their span."""
    e = basis.elements
    i, j = np.triu_indices(basis.dim, k=1)
    if i.size == 0:
        return True
    br = e[i] @ e[j] - e[j] @ e[i]
    v = to_coords(br)
    q = basis.coords
    for _ in range(2):
        v = v - (v @ q.T) @ q
    norms = np.linalg.norm(to_coords(br), axis=1)
    return bool(np.all(np.linalg.norm(v, axis=1) <= tol * (1.0 + norms)))


def _check_generators(generators):
    if len(generators) == 0:
        raise ValueError("need at least one generator")
    mats = [as_matrix(g) for g in generators]
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise ShapeError("generators have mixed dimensions")
    return n, [validate_skew(m, f"generator {k}") for k, m in enumerate(mats)]


def lie_closure(generators):
    """Orthonormal basis of the smallest real Lie algebra containing ``generators``.

    Breadth-first over bracket pairs; each bracket is Gram-Schmidt projected
    (twice) against the current basis and kept if the residual exceeds
    ``1e-9 * (1 + ||bracket||)``. Zero generators are ignored.
    """
    n, mats = _check_generators(generators)
    elements = _kernels.closure(np.stack(mats), tol=rank_tol())
    if elements.shape[0] == 0:
        raise ValueError("all generators are zero")
    return LieBasis(n, elements, closed=True)


def u_basis(n):
    """Orthonormal basis of u(n): the traceless basis of su(n) plus ``iI/sqrt(n)``."""
    els = list(su_basis(n).elements) if n > 1 else []
    els.append(1j * np.eye(n) / np.sqrt(n))
    return LieBasis(n, np.array(els), closed=True)


def su_basis(n):
    """Orthonormal basis of su(n) built from generalized Gell-Mann matrices."""
    if n < 2:
        raise ValueError("su(n) needs n >= 2")
    els = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), complex)
            s[j, k] = s[k, j] = 1j / np.sqrt(2)
            els.append(s)
            a = np.zeros((n, n), complex)
            a[j, k], a[k, j] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            els.append(a)
    for m in range(1, n):
        d = np.zeros(n)
        d[:m] = 1.0
        d[m] = -m
        els.append(1j * np.diag(d) / np.sqrt(m * (m + 1)))
    return LieBasis(n, np.array(els), closed=True)


def _eigen_clusters(d):
    """Multiplicities of the distinct eigenvalues of a density matrix."""
    w = np.sort(np.linalg.eigvalsh(d.matrix))
    gaps = np.diff(w)
    bad = (gaps > CLUSTER_TOL) & (gaps < CONDITION_GAP)
    if np.any(bad):
        raise ConditioningError(
            f"eigenvalue gap {gaps[bad].min():.3g} is too small to decide degeneracy reliably"
        )
    breaks = np.flatnonzero(gaps > CLUSTER_TOL)
    edges = np.concatenate([[0], breaks + 1, [w.size]])
    return np.diff(edges)


def centralizer_in_full(d):
    """Dimension of the centralizer of ``iD`` in u(n): sum of squared multiplicities."""
    d = as_density(d)
    return int(np.sum(_eigen_clusters(d) ** 2))


def ad_rank(basis, d):
    """Rank of ``X -> [X, D]`` on the span of ``basis``."""
    d = as_density(d)
    if d.n != basis.n:
        raise ShapeError(f"density matrix is {d.n}x{d.n}, algebra acts on n={basis.n}")
    _eigen_clusters(d)
    dm = d.matrix
    images = basis.elements @ dm - dm @ basis.elements
    a = to_coords(images)
    sv = np.linalg.svd(a, compute_uv=False)
    # ||ad_D|| <= 2||D||, so ||D|| is the natural floor for the threshold
    thr = rank_threshold(sv, a.shape, scale=np.linalg.norm(dm))
    return int(np.sum(sv > thr))


def centralizer_intersection_dim(basis, d):
    """``dim(L ∩ C_D)``: kernel dimension of ``ad_D`` restricted to ``L``."""
    return basis.dim - ad_rank(basis, d)


def contains_scalar(basis):
    """True if ``iI`` lies in the span of the basis."""
    return basis.contains(1j * np.eye(basis.n) / np.sqrt(basis.n))


def remove_scalar(basis):
    """Basis of the projection of the span onto the traceless matrices."""
    n = basis.n
    s = to_coords((1j * np.eye(n) / np.sqrt(n))[None])[0]
    q = basis.coords
    q = q - np.outer(q @ s, s)
    _, sv, vt = np.linalg.svd(q, full_matrices=False)
    if sv.size == 0 or sv[0] <= rank_tol():
        return None
    r = int(np.sum(sv > rank_threshold(sv, q.shape, scale=1.0)))
    return LieBasis(n, from_coords(vt[:r], n), closed=basis.closed)


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """A complex bilinear form ``M`` with ``X M + M X^T = 0`` on an algebra."""

    n: int
    matrix: np.ndarray = field(repr=False)
    symmetry: str
    nondegenerate: bool


def _form_units(n, symmetry):
    units = []
    if symmetry == "symmetric":
        for i, j in combinations_with_replacement(range(n), 2):
            e = np.zeros((n, n), complex)
            e[i, j] = e[j, i] = 1.0
            units.append(e)
    elif symmetry == "antisymmetric":
        for i in range(n):
            for j in range(i + 1, n):
                e = np.zeros((n, n), complex)
                e[i, j], e[j, i] = 1.0, -1.0
                units.append(e)
    else:
        raise ValueError(f"symmetry must be 'symmetric' or 'antisymmetric', got {symmetry!r}")
    return np.array(units).reshape(-1, n, n)


def is_nondegenerate(m, tol=None):
    sv = np.linalg.svd(m, compute_uv=False)
    return bool(sv[-1] > rank_threshold(sv, m.shape, tol=tol))


def find_invariant_form(basis, symmetry):
    """Basis of the forms ``M`` of the given symmetry preserved by the algebra.

    Solves ``X M + M X^T = 0`` for all basis elements ``X`` with ``M`` ranging
    over complex (anti)symmetric matrices; the homogeneous system's null
    space comes from an SVD.
    """
    n = basis.n
    units = _form_units(n, symmetry)
    if units.shape[0] == 0:
        return []
    x = basis.elements
    # cols[k] = stacked (X M_k + M_k X^T) over all X
    cols = np.einsum("aij,kjl->kail", x, units) + np.einsum("kij,alj->kail", units, x)
    a = cols.reshape(units.shape[0], -1).T
    _, sv, vt = np.linalg.svd(a, full_matrices=True)
    sv_full = np.zeros(units.shape[0])
    sv_full[: sv.size] = sv
    null = vt[sv_full <= rank_threshold(sv, a.shape, scale=1.0)].conj()
    forms = []
    for c in null:
        m = np.einsum("k,kij->ij", c, units)
        m = m / np.linalg.norm(m)
        forms.append(BilinearForm(n, m, symmetry, is_nondegenerate(m)))
    return forms


def has_nondegenerate_form(forms, seed=0):
    """True if some member of the span of ``forms`` is nondegenerate.

    Checks the individual forms and then a random combination, which is
    nondegenerate with probability one if any member of the span is.
    """
    if not forms:
        return False
    if any(f.nondegenerate for f in forms):
        return True
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(len(forms)) + 1j * rng.standard_normal(len(forms))
    m = np.einsum("k,kij->ij", c, np.array([f.matrix for f in forms]))
    return is_nondegenerate(m / np.linalg.norm(m))


def conjugate_basis(basis, u):
    """The basis ``{U e U^*}``; orthonormality and closure are preserved."""
    u = as_matrix(u)
    if u.shape != (basis.n, basis.n):
        raise ShapeError(f"unitary is {u.shape}, algebra acts on n={basis.n}")
    if np.linalg.norm(u.conj().T @ u - np.eye(basis.n)) > 1e-8:
        raise ValidationError("conjugating matrix is not unitary")
    return LieBasis(basis.n, u @ basis.elements @ u.conj().T, closed=basis.closed)
