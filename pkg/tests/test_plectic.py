import pytest
from hypothesis import given, strategies as st

from conftest import CHARTS, forms
from msgeom.brackets import schouten
from msgeom.exterior import Form, MultiVector, contract, ext_d, lie_derivative, volume_form
from msgeom.parsing import parse_form, parse_mvf
from msgeom.plectic import (
    HamPair,
    Nondegeneracy,
    PlecticSystem,
    check_nplectic,
    hamiltonian_solve,
    hamiltonian_verify,
    jacobi_residual,
    lie_n_bracket,
    omega_kernel_basis,
    poisson,
    poisson_schouten_residual,
    poisson_skew_residual,
    rogers_residual,
    zeta,
)
from msgeom.symbolic import Chart


def _symplectic4():
    c = CHARTS[4]
    return Form(c, 2, {(0, 2): 1, (1, 3): 1})


omegas = st.sampled_from([volume_form(CHARTS[3]), volume_form(CHARTS[4]), _symplectic4()])


@st.composite
def ham_pairs(draw, omega, degree=None):
    n = omega.degree - 1
    k = draw(st.integers(max(0, n - 3), n - 1)) if degree is None else degree
    alpha = draw(forms(omega.chart, k, max_deg=2))
    sol = hamiltonian_solve(alpha, omega, draw(st.sampled_from([1, -1])))
    assert sol is not None
    return sol.pair


@pytest.fixture
def vol3(r3):
    return volume_form(r3)


def test_zeta_values():
    assert zeta(1) == 1 and zeta(2) == 1 and zeta(3) == -1 and zeta(4) == -1 and zeta(5) == 1
    with pytest.raises(ValueError):
        zeta(0)


@pytest.mark.parametrize("k", range(1, 9))
def test_zeta_consecutive(k):
    assert zeta(k) * zeta(k + 1) == (-1) ** (k + 1)


@pytest.mark.parametrize("k", range(1, 9))
@pytest.mark.parametrize("l", range(1, 9))
def test_zeta_product_laws(k, l):
    assert zeta(k) * zeta(l) * zeta(k + l - 1) == -((-1) ** (k + l + k * l))
    assert zeta(k) * zeta(l) == -((-1) ** (l * k)) * zeta(k + l)


def test_nplectic_examples(r3, vol3):
    assert check_nplectic(vol3).ok
    rep = check_nplectic(parse_form("dx^dy", r3))
    assert rep.closed and rep.nondegenerate is Nondegeneracy.NO


def test_nplectic_nonconstant_reports_sample(r3):
    rep = check_nplectic(parse_form("(1 + x^2)*dx^dy^dz", r3))
    assert rep.closed and rep.nondegenerate is Nondegeneracy.GENERIC_AT_SAMPLE and rep.sample is not None
    bad = check_nplectic(parse_form("x*dx^dy^dz", r3), sample=[0, 1, 1])
    assert bad.nondegenerate is Nondegeneracy.DEGENERATE_AT_SAMPLE and not bad.ok


def test_nplectic_not_closed(r3):
    assert not check_nplectic(parse_form("z*dx^dy", r3)).closed


def test_kernel_examples(vol3):
    assert omega_kernel_basis(vol3, 1) == []
    assert omega_kernel_basis(vol3, 3) == []
    c = Chart.of("x y z w")
    ker = omega_kernel_basis(parse_form("dx^dy^dz", c), 1)
    assert ker == [parse_mvf("d/dw", c)]


def test_kernel_rejects_nonconstant(r3):
    with pytest.raises(ValueError):
        omega_kernel_basis(parse_form("x*dx^dy^dz", r3), 1)


def test_verify_sign_examples(r3, vol3):
    rep = hamiltonian_verify(parse_form("z*dx", r3), parse_mvf("d/dy", r3), vol3)
    assert rep.sign_matched == -1
    rep = hamiltonian_verify(parse_form("-x*dy", r3), parse_mvf("d/dz", r3), vol3)
    assert rep.sign_matched == 1
    rep = hamiltonian_verify(parse_form("x*dy", r3), MultiVector.zero(r3, 1), vol3)
    assert rep.sign_matched is None and rep.residual


def test_verify_degree_mismatch(r3, vol3):
    with pytest.raises(ValueError):
        hamiltonian_verify(parse_form("x*dy", r3), parse_mvf("d/dx^d/dy", r3), vol3)


def test_solve_examples(r3, vol3):
    sol = hamiltonian_solve(parse_form("-x*dy", r3), vol3)
    assert sol.pair.field == parse_mvf("d/dz", r3) and sol.kernel == []
    sol = hamiltonian_solve(parse_form("x*dx", r3), vol3)
    assert not sol.pair.field


def test_solve_reports_no_solution(r3):
    omega = parse_form("dx^dy", Chart.of("x y z w"))
    c = omega.chart
    # d(w) = dw is outside the image of v -> v -| (dx^dy) on R^4
    assert hamiltonian_solve(parse_form("w", c, 0), omega) is None


def test_system_solves_field(r3, vol3):
    s = PlecticSystem(vol3, parse_form("-x*dy", r3))
    assert s.x_h == parse_mvf("d/dz", r3)
    with pytest.raises(ValueError):
        PlecticSystem(vol3, parse_form("-x*dy", r3), parse_mvf("d/dx", r3))
    with pytest.raises(ValueError):
        PlecticSystem(parse_form("dx^dy", r3))


def test_r3_bracket_value(r3, vol3):
    a = HamPair(parse_form("z*dx", r3), parse_mvf("d/dy", r3), -1)
    h = HamPair(parse_form("-x*dy", r3), parse_mvf("d/dz", r3), 1)
    # X_a = -d/dy in the normative convention, so {a,h} = d/dz -| (-d/dy) -| vol
    assert poisson(a, h, vol3) == parse_form("-dx", r3)
    xh = h.ham_field
    residual = poisson(a, h, vol3) + lie_derivative(xh, a.form) - ext_d(contract(xh, a.form))
    assert not residual


def test_bracket_with_closed_form_vanishes(r3, vol3):
    closed = HamPair(parse_form("dx", r3), MultiVector.zero(r3, 1), 1)
    a = HamPair(parse_form("-x*dy", r3), parse_mvf("d/dz", r3), 1)
    assert not poisson(closed, a, vol3)
    assert not poisson(a, closed, vol3)


def test_lie_n_binary_agrees_with_poisson_sign(r3, vol3):
    a = HamPair(parse_form("z*dx", r3), parse_mvf("d/dy", r3), -1)
    b = HamPair(parse_form("-x*dy", r3), parse_mvf("d/dz", r3), 1)
    # zeta(2) = 1 and |b| = 2 give the same sign
    assert lie_n_bracket([a, b], vol3) == poisson(a, b, vol3)


def test_lie_n_rejects_wrong_degree(r3, vol3):
    a = HamPair(parse_form("x", r3, 0), parse_mvf("d/dy^d/dz", r3), 1)
    with pytest.raises(ValueError):
        lie_n_bracket([a, a], vol3)


@given(st.data())
def test_solved_pairs_satisfy_their_equation(data):
    omega = data.draw(omegas)
    p = data.draw(ham_pairs(omega))
    assert not p.residual(omega)
    assert hamiltonian_verify(p.form, p.field, omega, prefer=p.sign).sign_matched == p.sign


@given(st.data())
def test_poisson_graded_skew(data):
    omega = data.draw(omegas)
    a, b = data.draw(ham_pairs(omega)), data.draw(ham_pairs(omega))
    assert not poisson_skew_residual(a, b, omega)


@given(st.data())
def test_bracket_field_is_schouten(data):
    omega = data.draw(omegas)
    a, b = data.draw(ham_pairs(omega)), data.draw(ham_pairs(omega))
    assert not poisson_schouten_residual(a, b, omega)
    assert schouten(a.ham_field, b.ham_field).degree == a.field.degree + b.field.degree - 1


@given(st.data())
def test_graded_jacobi_up_to_exact(data):
    omega = data.draw(omegas)
    a, b, c = (data.draw(ham_pairs(omega)) for _ in range(3))
    assert not jacobi_residual(a, b, c, omega)


@given(st.data())
def test_rogers_lemma(data):
    omega = data.draw(omegas)
    n = omega.degree - 1
    m = data.draw(st.integers(2, min(3, n + 1)))
    pairs = [data.draw(ham_pairs(omega, n - 1)) for _ in range(m)]
    assert not rogers_residual(pairs, omega)


@given(st.data())
def test_lie_n_brackets_are_hamiltonian(data):
    omega = data.draw(omegas)
    n = omega.degree - 1
    m = data.draw(st.integers(2, n + 1))
    pairs = [data.draw(ham_pairs(omega, n - 1)) for _ in range(m)]
    out = lie_n_bracket(pairs, omega)
    assert out.degree == n + 1 - m or not out
    if m <= n:
        assert hamiltonian_solve(out, omega) is not None


def test_ham_field_flips_with_sign(r3):
    x = parse_mvf("d/dz", r3)
    assert HamPair(Form.zero(r3, 1), x, -1).ham_field == -x
    assert HamPair(Form.zero(r3, 1), x, 1).grading == 2
