"""Dense complex matrix primitives shared by the rest of the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Skew-Hermitian
matrices are identified with real vectors of length ``2 n**2`` (real parts
followed by imaginary parts), under which the Hilbert-Schmidt product
``Re tr(X^* Y)`` is the ordinary dot product.
"""

import os
import warnings

import numpy as np

#: Relative tolerance on ``||X + X^*||`` for accepting a matrix as skew-Hermitian.
SKEW_TOL = 1e-8
#: Default relative singular-value threshold for numerical rank.
RANK_TOL = 1e-9
#: Unit-norm tolerance for state vectors.
STATE_TOL = 1e-10


class ShapeError(ValueError):
    """Operands have incompatible shapes."""


class ValidationError(ValueError):
    """A matrix or vector is not in the class an operation requires."""


class ConditioningError(ValueError):
    """Input is too close to a degenerate configuration to decide reliably."""


def rank_tol():
    """Relative rank threshold; ``QCA_RANK_TOL`` overrides it (expert use)."""
    value = os.environ.get("QCA_RANK_TOL")
    return float(value) if value else RANK_TOL


def as_matrix(x):
    """Return ``x`` as a finite complex square matrix."""
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] == 0:
        raise ShapeError(f"expected a nonempty square matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValidationError("matrix has non-finite entries")
    return x


def _same_square(x, y):
    x, y = as_matrix(x), as_matrix(y)
    if x.shape != y.shape:
        raise ShapeError(f"shape mismatch: {x.shape} vs {y.shape}")
    return x, y


def bracket(x, y):
    """Commutator ``XY - YX``."""
    x, y = _same_square(x, y)
    return x @ y - y @ x


def hs_inner(x, y):
    """Real Hilbert-Schmidt inner product ``Re tr(X^* Y)``."""
    x, y = _same_square(x, y)
    return float(np.real(np.vdot(x, y)))


def skew_project(x, warn=False):
    """Skew-Hermitian part ``(X - X^*)/2``.

    With ``warn=True`` a ``UserWarning`` is emitted when the discarded
    Hermitian part exceeds the validation tolerance.
    """
    x = as_matrix(x)
    s = 0.5 * (x - x.conj().T)
    if warn and np.linalg.norm(x - s) > SKEW_TOL * (1.0 + np.linalg.norm(x)):
        warnings.warn("matrix has a non-negligible Hermitian part; it was discarded", stacklevel=2)
    return s


def is_skew_hermitian(x, tol=SKEW_TOL):
    x = as_matrix(x)
    return bool(np.linalg.norm(x + x.conj().T) <= tol * (1.0 + np.linalg.norm(x)))


def validate_skew(x, name="matrix"):
    """Check skew-Hermiticity within :data:`SKEW_TOL` and return the exact projection."""
    x = as_matrix(x)
    if not is_skew_hermitian(x):
        err = np.linalg.norm(x + x.conj().T)
        raise ValidationError(f"{name} is not skew-Hermitian (||X + X*|| = {err:.3g})")
    return 0.5 * (x - x.conj().T)


def to_coords(mats):
    """Real coordinates of a stack of matrices, shape ``(k, 2 n**2)``."""
    mats = np.asarray(mats, dtype=np.complex128)
    flat = mats.reshape(mats.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def from_coords(coords, n):
    """Inverse of :func:`to_coords`."""
    coords = np.atleast_2d(np.asarray(coords, dtype=np.float64))
    nn = n * n
    return (coords[:, :nn] + 1j * coords[:, nn:]).reshape(-1, n, n)


def rank_threshold(sv, shape, scale=None, tol=None):
    """Cut-off below which a singular value counts as zero.

    ``max(shape) * max(sigma_max, scale) * tol``; ``scale`` is a reference
    magnitude that keeps an all-noise input from being ranked against its own
    (tiny) largest singular value.
    """
    tol = rank_tol() if tol is None else tol
    top = float(sv[0]) if len(sv) else 0.0
    if scale is not None:
        top = max(top, float(scale))
    return max(shape) * top * tol


def numerical_rank(vectors, scale=None, tol=None):
    """Rank of the real span of a list of matrices under :func:`hs_inner`.

    Parameters
    ----------
    vectors : sequence of array_like
        Matrices (any common shape) viewed as real vectors.
    scale : float, optional
        Reference magnitude for the threshold; see :func:`rank_threshold`.
    """
    if len(vectors) == 0:
        raise ValueError("numerical_rank needs at least one vector")
    mats = [np.asarray(v, dtype=np.complex128) for v in vectors]
    if any(m.shape != mats[0].shape for m in mats):
        raise ShapeError("vectors have mismatched shapes")
    stacked = to_coords(np.stack(mats))
    sv = np.linalg.svd(stacked, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rank_threshold(sv, stacked.shape, scale, tol)))


def expm_skew(s):
    """``exp(S)`` for skew-Hermitian ``S`` via the eigendecomposition of ``-iS``."""
    s = validate_skew(s, "exponent")
    w, v = np.linalg.eigh(-1j * s)
    return (v * np.exp(1j * w)) @ v.conj().T


def is_unitary(u, tol=1e-10):
    u = as_matrix(u)
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) <= tol)


def haar_random_unitary(n, seed=None):
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_skew(n, rng, traceless=False):
    """Gaussian random skew-Hermitian matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = 0.5 * (z - z.conj().T)
    if traceless:
        s -= np.trace(s) / n * np.eye(n)
    return s


def as_state(psi, n=None):
    """Validate a unit complex state vector."""
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.ndim != 1 or psi.size == 0:
        raise ShapeError(f"expected a 1-d state vector, got shape {psi.shape}")
    if n is not None and psi.size != n:
        raise ShapeError(f"state has dimension {psi.size}, expected {n}")
    if not np.all(np.isfinite(psi)):
        raise ValidationError("state has non-finite amplitudes")
    if abs(np.vdot(psi, psi).real - 1.0) > STATE_TOL:
        raise ValidationError("state vector is not normalized")
    return psi


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    The stored matrix is the exact Hermitian part of the input, read-only.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = as_matrix(matrix)
        if np.linalg.norm(m - m.conj().T) > 1e-9:
            raise ValidationError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        if abs(np.trace(m).real - 1.0) > 1e-9:
            raise ValidationError(f"density matrix trace is {np.trace(m).real:.12g}, expected 1")
        if np.linalg.eigvalsh(m).min() < -1e-10:
            raise ValidationError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, name, value):
        raise AttributeError("DensityMatrix is immutable")

    @property
    def n(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DensityMatrix(n={self.n})"


def as_density(d):
    return d if isinstance(d, DensityMatrix) else DensityMatrix(d)
