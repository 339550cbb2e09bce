import pytest
from hypothesis import given, strategies as st

from conftest import forms, polys
from msgeom.brackets import vf_bracket
from msgeom.exterior import Form, MultiVector, contract, ext_d, lie_derivative, vector_field
from msgeom.parsing import parse_form, parse_mvf
from msgeom.phase import (
    PhaseSpace,
    build_phase_space,
    complete_lift,
    in_kernel,
    lift_list,
    momentum_bracket_residuals,
    momentum_form,
    momentum_pair,
    momentum_residual,
    position_form,
    position_pair,
    push_zero_check,
)
from msgeom.plectic import hamiltonian_verify, poisson, zeta
from msgeom.symbolic import Chart

BASE = Chart(("q1", "q2", "q3"))


@pytest.fixture(scope="module")
def ps2():
    return build_phase_space(BASE, 2)


@pytest.fixture(scope="module")
def ps1():
    return build_phase_space(BASE, 1)


@st.composite
def base_fields(draw, max_deg=2):
    return vector_field(BASE, [draw(polys(BASE, max_deg)) for _ in range(BASE.dim)])


@st.composite
def commuting_pair(draw):
    """Two fields along different axes with coefficients in the third coordinate."""
    i, j, k = draw(st.permutations([0, 1, 2]))
    f = draw(polys(Chart((BASE.names[k],)), 2)).rechart(BASE, [k])
    g = draw(polys(Chart((BASE.names[k],)), 2)).rechart(BASE, [k])
    return [MultiVector.basis(BASE, (i,), f), MultiVector.basis(BASE, (j,), g)]


@st.composite
def kernel_lists(draw, max_len=2):
    if max_len >= 2 and draw(st.booleans()):
        return draw(commuting_pair())
    return [draw(base_fields())]


def test_symplectic_cotangent(ps1):
    c = ps1.chart
    assert c.names == ("q1", "q2", "q3", "p1", "p2", "p3")
    assert ps1.omega == parse_form("dq1^dp1 + dq2^dp2 + dq3^dp3", c)


def test_k2_over_r3(ps2):
    c = ps2.chart
    assert c.dim == 6
    assert ps2.theta == parse_form("p12*dq1^dq2 + p13*dq1^dq3 + p23*dq2^dq3", c)
    assert ps2.omega == -ext_d(ps2.theta)
    assert ps2.check().ok


def test_top_degree_fiber():
    ps = build_phase_space(Chart(("q1", "q2")), 2)
    assert ps.chart.names == ("q1", "q2", "p12")
    assert ps.check().ok


def test_k_out_of_range():
    with pytest.raises(ValueError):
        PhaseSpace(BASE, 0)
    with pytest.raises(ValueError):
        PhaseSpace(BASE, 4)


def test_coordinate_field_lifts_to_itself(ps2):
    y = parse_mvf("d/dq1", BASE)
    assert complete_lift(y, ps2) == parse_mvf("d/dq1", ps2.chart)


def test_lift_k1_by_hand(ps1):
    lift = complete_lift(parse_mvf("q1*d/dq2", BASE), ps1)
    assert lift == parse_mvf("q1*d/dq2 - p2*d/dp1", ps1.chart)


def test_translation_generators_lift_on_top_degree():
    ps = build_phase_space(BASE, 3)
    for i in range(3):
        y = MultiVector.basis(BASE, (i,))
        assert complete_lift(y, ps) == MultiVector.basis(ps.chart, (i,))


def test_lift_rejects_fields_on_total_space(ps2):
    with pytest.raises(ValueError):
        complete_lift(parse_mvf("d/dp12", ps2.chart), ps2)


def test_classical_momentum_sign(ps1):
    x = parse_mvf("q2*d/dq1 + d/dq3", BASE)
    # P(X) = -zeta(2) X# -| theta = -(p . X)
    assert momentum_form([x], ps1) == parse_form("-q2*p1 - p3", ps1.chart, 0)


def test_momentum_of_coordinate_fields(ps2):
    ys = [parse_mvf("d/dq1", BASE), parse_mvf("d/dq2", BASE)]
    assert in_kernel(ys)
    p = momentum_form(ys, ps2)
    # -zeta(3) = 1 and d/dq2 -| d/dq1 -| theta = p12
    assert p == parse_form("p12", ps2.chart, 0)
    assert not momentum_residual(ys, ps2)
    single = [parse_mvf("d/dq1", BASE)]
    assert ext_d(momentum_form(single, ps2)) == -contract(lift_list(single, ps2), ps2.omega) * zeta(1)


def test_momentum_of_empty_list_degree(ps2):
    assert momentum_form([], ps2) == ps2.theta * -zeta(1)


def test_momentum_degree_limit(ps2):
    ys = [parse_mvf(f"d/dq{i}", BASE) for i in (1, 2, 3)]
    with pytest.raises(ValueError):
        momentum_form(ys, ps2)


def test_noncommuting_list_not_in_kernel():
    ys = [parse_mvf("d/dq1", BASE), parse_mvf("q1*d/dq2", BASE)]
    assert not in_kernel(ys)


def test_constant_position_form_is_closed(ps2):
    a = position_form(parse_form("2*dq1", BASE), ps2)
    assert not ext_d(a)


def test_position_example(ps2):
    a = parse_form("q1*dq2", BASE)
    pair = position_pair(a, ps2)
    assert not pair.residual(ps2.omega)
    assert not ps2.push(pair.field)
    assert push_zero_check(a, ps2)


def test_position_of_top_degree_has_no_field(ps2):
    with pytest.raises(ValueError):
        position_pair(parse_form("dq1^dq2", BASE), ps2)
    with pytest.raises(ValueError):
        position_form(parse_form("dq1^dq2^dq3", BASE), ps2)


def test_bracket_relations_flat_fields(ps2):
    y1 = [parse_mvf("d/dq1", BASE)]
    y2 = [parse_mvf("d/dq2", BASE)]
    r = momentum_bracket_residuals(y1, y2, parse_form("q3*dq1", BASE), ps2)
    assert r.ok
    assert momentum_form(y1 + y2, ps2) == parse_form("p12", ps2.chart, 0)


def test_bracket_relations_rotation(ps2):
    y1 = [parse_mvf("d/dq1", BASE)]
    y2 = [parse_mvf("q1*d/dq2 - q2*d/dq1", BASE)]
    assert vf_bracket(y1[0], y2[0]) == parse_mvf("d/dq2", BASE)
    assert momentum_bracket_residuals(y1, y2, parse_form("q3*dq1", BASE), ps2).ok


def test_mixed_relation_by_hand(ps2):
    alpha = parse_form("q3*dq1", BASE)
    y = parse_mvf("d/dq3", BASE)
    # Y -| d alpha = d/dq3 -| (dq3^dq1) = dq1
    pa = position_pair(alpha, ps2)
    py = momentum_pair([y], ps2)
    assert poisson(pa, py, ps2.omega) == -parse_form("dq1", ps2.chart) * zeta(1)


def test_mixed_relation_sign_for_two_fields(ps2):
    alpha = parse_form("q2*dq3", BASE)
    ys = [parse_mvf("d/dq2", BASE), parse_mvf("d/dq3", BASE)]
    br = poisson(position_pair(alpha, ps2), momentum_pair(ys, ps2), ps2.omega)
    # Y -| d alpha = 1; the sign is -zeta(3) = +1, whereas -zeta(2) would give -1
    assert br == parse_form("1", ps2.chart, 0)
    assert not momentum_bracket_residuals(ys, ys, alpha, ps2).mixed


def test_bracket_relations_require_kernel(ps2):
    bad = [parse_mvf("d/dq1", BASE), parse_mvf("q1*d/dq2", BASE)]
    with pytest.raises(ValueError, match="kernel"):
        momentum_bracket_residuals(bad, [parse_mvf("d/dq1", BASE)], parse_form("q1", BASE, 0), ps2)


@given(base_fields())
def test_complete_lift_invariants(y):
    ps = build_phase_space(BASE, 2)
    lift = complete_lift(y, ps)
    assert not lie_derivative(lift, ps.theta)
    assert ps.push(lift) == y


@given(kernel_lists())
def test_momentum_form_is_hamiltonian(ys):
    ps = build_phase_space(BASE, 2)
    assert not momentum_residual(ys, ps)
    pair = momentum_pair(ys, ps)
    assert hamiltonian_verify(pair.form, pair.field, ps.omega).sign_matched == 1


@given(st.data())
def test_three_bracket_relations(data):
    ps = build_phase_space(BASE, 2)
    y1 = data.draw(kernel_lists())
    y2 = data.draw(kernel_lists())
    alpha = data.draw(_base_forms(data.draw(st.integers(0, 1))))
    beta = data.draw(_base_forms(data.draw(st.integers(0, 1))))
    r = momentum_bracket_residuals(y1, y2, alpha, ps, beta)
    assert not r.momentum
    assert not r.position
    assert not r.mixed


def _base_forms(deg):
    return forms(BASE, deg, max_deg=2)


@given(st.data())
def test_position_forms_push_to_zero(data):
    ps = build_phase_space(BASE, 2)
    a = data.draw(_base_forms(data.draw(st.integers(0, 1))))
    assert push_zero_check(a, ps)


def test_pull_keeps_coefficients(ps2):
    t = parse_form("q1*q3*dq2", BASE)
    assert str(position_form(t, ps2)) == "q1*q3*dq2"
    assert isinstance(position_form(t, ps2), Form)
