"""Controllability verdicts from the dynamical Lie algebra.

Every verdict reduces to integer dimension counts: ``dim L``, the centralizer
dimensions of a density matrix in u(n) and in ``L``, and an invariant-form
witness for the symplectic case.
"""

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .lie import (
    LieBasis,
    centralizer_in_full,
    centralizer_intersection_dim,
    contains_scalar,
    find_invariant_form,
    has_nondegenerate_form,
    lie_closure,
    remove_scalar,
)
from .matcore import DensityMatrix, as_density, as_matrix, as_state
from .models import SystemModel

LABELS = ("su(n)", "u(n)", "sp-conjugate", "sp-conjugate-plus-scalar", "not-transitive", "unclassified")
OBSTRUCTIONS = ("B-not-transitive", "B-transitive", "inconclusive")


class AnalysisError(RuntimeError):
    """Computed verdicts contradict each other (numerical-rank failure)."""


def pure_state_reference(n):
    """``diag(1, 0, ..., 0)``."""
    d = np.zeros((n, n), complex)
    d[0, 0] = 1.0
    return DensityMatrix(d)


def sp_dim(k):
    return k * (2 * k + 1)


def test_oc(basis):
    """Operator controllability: ``(True, 'unitary')`` for u(n),
    ``(True, 'special-unitary')`` for su(n), else ``(False, 'none')``."""
    n = basis.n
    if basis.dim == n * n:
        return True, "unitary"
    if basis.dim == n * n - 1 and basis.is_traceless():
        return True, "special-unitary"
    return False, "none"


def orbit_dims(basis, d):
    """Both sides of the orbit-equality condition: ``(n^2 - dim C_D, dim L - dim(L ∩ C_D))``."""
    d = as_density(d)
    n = basis.n
    return n * n - centralizer_in_full(d), basis.dim - centralizer_intersection_dim(basis, d)


def orbit_equality(basis, d):
    """True iff the orbit of ``D`` under ``e^L`` is its full unitary orbit."""
    full, sub = orbit_dims(basis, d)
    return full == sub


def test_psc(basis):
    """Pure-state controllability: ``dim L - dim(L ∩ C_D) == 2n - 2`` for ``D = diag(1,0,..,0)``."""
    n = basis.n
    return basis.dim - centralizer_intersection_dim(basis, pure_state_reference(n)) == 2 * n - 2


def test_esc(basis):
    # equivalent-state and pure-state controllability coincide
    return test_psc(basis)


def test_dmc(basis):
    # density-matrix controllability coincides with operator controllability
    return test_oc(basis)[0]


def _sp_witness(basis):
    """Nondegenerate antisymmetric invariant form on the traceless part, if any."""
    core = remove_scalar(basis) if contains_scalar(basis) else basis
    if core is None:
        return False
    return has_nondegenerate_form(find_invariant_form(core, "antisymmetric"))


def classify(basis, psc=None):
    """Transitivity class of ``L`` by dimension, trace and invariant-form tests.

    Returns one of :data:`LABELS`. ``'unclassified'`` means the algebra passed
    the pure-state test but matched no transitive family, which can only
    happen through a numerical-rank failure.
    """
    n = basis.n
    if basis.dim == n * n:
        return "u(n)"
    if basis.dim == n * n - 1 and basis.is_traceless():
        return "su(n)"
    if psc is None:
        psc = test_psc(basis)
    if not psc:
        return "not-transitive"
    if n % 2 == 0:
        k = n // 2
        scalar = contains_scalar(basis)
        if basis.dim == sp_dim(k) + int(scalar) and _sp_witness(basis):
            return "sp-conjugate-plus-scalar" if scalar else "sp-conjugate"
    return "unclassified"


def _is_so4_in_su4(basis):
    """4x4 traceless 6-dim algebra preserving a nondegenerate symmetric form."""
    if basis.n != 4 or basis.dim != 6 or not basis.is_traceless():
        return False
    return has_nondegenerate_form(find_invariant_form(basis, "symmetric"))


class SmallTimeReport(NamedTuple):
    label: str
    dim_B: int
    hypothesis: str
    notes: tuple


def small_time_report(model, B=None):
    """Arbitrarily-small-time obstruction from the control-only algebra ``B``.

    ``hypothesis`` reports whether ``B`` is known to lie in no transitive
    proper subalgebra: ``'holds'`` for the so(4)-in-su(4) case, ``'fails'``
    when ``B`` is itself transitive, ``'unverified'`` otherwise.
    """
    if B is None:
        B = lie_closure(list(model.controls))
    psc_b = test_psc(B)
    notes = []
    if not psc_b:
        label = "B-not-transitive"
        notes.append(
            f"control algebra B (dim {B.dim}) is not transitive on the sphere; state transfer in "
            "arbitrarily small time would need B inside a transitive proper subalgebra"
        )
        if _is_so4_in_su4(B):
            hypothesis = "holds"
            notes.append(
                "B is conjugate to so(4) inside su(4): not contained in a transitive proper "
                "subalgebra, so the system is not state controllable in arbitrarily small time"
            )
        else:
            hypothesis = "unverified"
            notes.append("whether B lies in a transitive proper subalgebra is not decided automatically")
        return SmallTimeReport(label, B.dim, hypothesis, tuple(notes))

    cls = classify(B, psc=True)
    if cls == "unclassified":
        notes.append("B passed the pure-state test but matched no transitive family (numerical rank?)")
        return SmallTimeReport("inconclusive", B.dim, "unverified", tuple(notes))
    if cls.startswith("sp-conjugate"):
        notes.append("B is sp-conjugate, hence maximal in su(n) and itself transitive")
    else:
        notes.append(f"B is {cls}: no obstruction from the control algebra")
    return SmallTimeReport("B-transitive", B.dim, "fails", tuple(notes))


@dataclass(frozen=True)
class AnalysisReport:
    n: int
    label: str
    dim_L: int
    dim_B: int
    traceless: bool
    contains_scalar: bool
    oc: bool
    oc_flavor: str
    psc: bool
    esc: bool
    dmc: bool
    classification: str
    small_time_obstruction: str
    small_time_hypothesis: str
    diagnostics: tuple = field(default=())

    def verdicts(self):
        """Everything except free-text fields; used for invariance checks."""
        d = asdict(self)
        for key in ("label", "diagnostics"):
            d.pop(key)
        return d

    def to_dict(self):
        d = asdict(self)
        d["diagnostics"] = list(self.diagnostics)
        return d


def analyze(model):
    """Full controllability report for a :class:`SystemModel`."""
    L = lie_closure(model.generators())
    B = lie_closure(list(model.controls))
    oc, flavor = test_oc(L)
    psc = test_psc(L)
    esc = test_esc(L)
    dmc = test_dmc(L)
    cls = classify(L, psc=psc)
    st = small_time_report(model, B)

    diagnostics = list(st.notes)
    if cls == "unclassified":
        diagnostics.append("transitive, unclassified: L passes the pure-state test but is not su(n), u(n) or sp")
    if psc and not oc:
        diagnostics.append("pure-state controllable but not operator controllable")
    if dmc != oc or esc != psc or (oc and not psc):
        raise AnalysisError(
            f"inconsistent verdicts oc={oc} psc={psc} esc={esc} dmc={dmc} (dim L = {L.dim})"
        )
    return AnalysisReport(
        n=model.n,
        label=model.label,
        dim_L=L.dim,
        dim_B=B.dim,
        traceless=L.is_traceless(),
        contains_scalar=contains_scalar(L),
        oc=oc,
        oc_flavor=flavor,
        psc=psc,
        esc=esc,
        dmc=dmc,
        classification=cls,
        small_time_obstruction=st.label,
        small_time_hypothesis=st.hypothesis,
        diagnostics=tuple(diagnostics),
    )


# keep pytest from collecting the verdict functions when tests import them
for _f in (test_oc, test_psc, test_esc, test_dmc):
    _f.__test__ = False


def realify(x):
    """Real ``2n x 2n`` form ``[[R, -Y], [Y, R]]`` of ``X = R + iY``."""
    x = as_matrix(x)
    r, y = x.real, x.imag
    return np.block([[r, -y], [y, r]])


def realify_state(psi):
    """``(Re psi; Im psi)``."""
    psi = as_state(psi)
    return np.concatenate([psi.real, psi.imag])


def realify_vector(psi):
    """:func:`realify_state` without the unit-norm check."""
    psi = np.asarray(psi, dtype=np.complex128)
    return np.concatenate([psi.real, psi.imag])


__all__ = [
    "AnalysisError",
    "AnalysisReport",
    "DensityMatrix",
    "LABELS",
    "LieBasis",
    "OBSTRUCTIONS",
    "SmallTimeReport",
    "SystemModel",
    "analyze",
    "classify",
    "orbit_dims",
    "orbit_equality",
    "pure_state_reference",
    "realify",
    "realify_state",
    "small_time_report",
    "test_dmc",
    "test_esc",
    "test_oc",
    "test_psc",
]
