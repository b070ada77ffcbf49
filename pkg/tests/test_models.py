import numpy as np
import pytest

from qca.analysis import analyze, test_oc, test_psc
from qca.lie import centralizer_intersection_dim, is_closed, lie_closure, su_basis
from qca.matcore import expm_skew, is_skew_hermitian
from qca.models import (
    ParameterError,
    SystemModel,
    build,
    example_orbit_pair,
    example_sp2_basis,
    single_spin,
    sp_element,
    standard_sp_basis,
    symplectic_j,
    two_spin,
)
import oracles

SWAP = np.eye(4)[[0, 2, 1, 3]]


@pytest.mark.parametrize("omega, controls", [(1.0, "xy"), (0.0, "xy"), (1.0, "x"), (2.5, "x")])
def test_single_spin_closure(omega, controls):
    m = single_spin(omega, controls)
    assert m.n == 2
    assert analyze(m).dim_L == 3
    assert oracles.naive_closure_dim(m.generators()) == 3


def test_single_spin_is_oc():
    assert analyze(single_spin(1.0)).oc_flavor == "special-unitary"


def test_two_spin_dimensions():
    m = two_spin(1.0, 1.0, 1.1, "ising")
    assert lie_closure(list(m.controls)).dim == 6
    assert lie_closure(m.generators()).dim == 15
    eq = two_spin(1.0, 1.0, 1.0)
    assert lie_closure(list(eq.controls)).dim == 3
    # frozen from the naive closure oracle: collective rotations plus Ising drift
    assert lie_closure(eq.generators()).dim == 9 == oracles.naive_closure_dim(eq.generators())


def test_two_spin_isotropic():
    m = two_spin(1.0, 1.0, 1.1, "isotropic")
    assert lie_closure(m.generators()).dim == 15 == oracles.naive_closure_dim(m.generators())


def test_two_spin_swap_symmetry_for_equal_gammas():
    m = two_spin(1.0, 0.7, 0.7)
    for b in m.controls:
        assert np.allclose(SWAP @ b @ SWAP, b)
    m = two_spin(1.0, 0.7, 0.9)
    assert not np.allclose(SWAP @ m.controls[0] @ SWAP, m.controls[0])


def test_two_spin_errors():
    with pytest.raises(ParameterError):
        two_spin(0.0, 1.0, 1.1)
    with pytest.raises(ParameterError):
        two_spin(1.0, 1.0, 1.1, "dipolar")


def test_emitted_matrices_are_skew():
    for m in (single_spin(1.3), two_spin(1.0, 1.0, 1.1), two_spin(0.5, 1.0, 2.0, "isotropic")):
        assert all(is_skew_hermitian(x) for x in m.generators())


def test_example_sp2_basis():
    b = example_sp2_basis()
    assert b.dim == 10 and b.closed and is_closed(b)
    d = np.diag([1.0, 0, 0, 0])
    assert centralizer_intersection_dim(b, d) == 4
    assert test_psc(b) and not test_oc(b)[0]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_standard_sp_basis(k):
    b = standard_sp_basis(k)
    assert b.dim == k * (2 * k + 1)
    assert b.closed
    j = symplectic_j(k)
    for x in b.elements:
        assert np.linalg.norm(x @ j + j @ x.T) <= 1e-12


def test_sp1_is_su2():
    sp1, su2 = standard_sp_basis(1), su_basis(2)
    assert all(su2.residual(x) <= 1e-10 for x in sp1.elements)
    assert all(sp1.residual(x) <= 1e-10 for x in su2.elements)


def test_example_orbit_pair():
    d, dp, j = example_orbit_pair(4, np.array([1.0, 0, 0, 0]))
    w = np.array([0, 0, 1.0, 0])
    assert np.allclose(d.matrix, 0.5 * (np.diag([1.0, 0, 0, 0]) + np.outer(w, w)))
    assert np.linalg.norm(d.matrix @ j - j @ d.matrix) <= 1e-10
    assert np.allclose(np.sort(np.linalg.eigvalsh(d.matrix)), [0, 0, 0.5, 0.5])
    assert np.linalg.norm(dp.matrix @ j - j @ dp.matrix.conj()) > 1e-3


def test_example_orbit_pair_symplectic_orbit():
    d, _, j = example_orbit_pair(6, np.ones(6) / np.sqrt(6))
    rng = np.random.default_rng(0)
    for _ in range(10):
        w = expm_skew(sp_element(3, rng))
        r = w @ d.matrix @ w.conj().T
        assert np.linalg.norm(r @ j - j @ r.conj()) <= 1e-9


@pytest.mark.parametrize("n", [3, 2, 5])
def test_example_orbit_pair_bad_n(n):
    with pytest.raises(ParameterError):
        example_orbit_pair(n)


def test_build():
    assert build("single-spin", omega=1.0).n == 2
    assert build("two-spin", J=1.0, gamma1=1.0, gamma2=1.1).n == 4
    assert build("example-sp2").m == 10
    assert build("example-orbit", n=6).m == 21
    with pytest.raises(ParameterError):
        build("two-spin", J=1.0)
    with pytest.raises(ParameterError):
        build("three-spin")


def test_system_model_validation():
    with pytest.raises(ValueError):
        SystemModel(np.eye(2), (1j * np.eye(2),))
    with pytest.raises(ParameterError):
        SystemModel(np.zeros((2, 2)), ())
    with pytest.raises(ParameterError):
        SystemModel(np.zeros((2, 2)), (np.zeros((3, 3)),))
