import pytest
from hypothesis import given, strategies as st

from conftest import charts, forms, mvfs
from msgeom.brackets import (
    bracket_hook_residual,
    cartan_residual,
    contract_list,
    dl_residual,
    interior_bracket_residual,
    lie_bracket_residual,
    lie_wedge_residual,
    list_boundary,
    schouten,
    schouten_antisymmetry_residual,
    schouten_jacobi_residual,
    schouten_leibniz_residual,
    vf_bracket,
)
from msgeom.exterior import Decomposable, MultiVector, contract, ext_d, lie_derivative, wedge
from msgeom.parsing import parse_form, parse_mvf


def test_coordinate_fields_commute(r3):
    assert not vf_bracket(parse_mvf("d/dx", r3), parse_mvf("d/dy", r3))


def test_vf_bracket_by_hand(r3):
    assert vf_bracket(parse_mvf("x*d/dy", r3), parse_mvf("d/dx", r3)) == parse_mvf("-d/dy", r3)


def test_vf_bracket_needs_vector_fields(r3):
    with pytest.raises(ValueError):
        vf_bracket(parse_mvf("d/dx^d/dy", r3), parse_mvf("d/dx", r3))


def test_constant_bivector_with_constant_field(r3):
    assert not schouten(parse_mvf("d/dx^d/dy", r3), parse_mvf("d/dz", r3))


def test_euler_field_with_bivector(r3):
    out = schouten(parse_mvf("x*d/dx", r3), parse_mvf("d/dx^d/dy", r3))
    assert out == parse_mvf("-d/dx^d/dy", r3)


def test_schouten_rejects_functions(r3):
    with pytest.raises(ValueError):
        schouten(MultiVector(r3, 0, {(): 1}), parse_mvf("d/dx", r3))


def test_interior_equation_hand_instance(r3):
    x, y = parse_mvf("d/dx", r3), parse_mvf("d/dy", r3)
    assert not interior_bracket_residual(x, y, parse_form("x*dy^dz", r3))


def test_lie_bracket_hand_instance(r3):
    x, y = parse_mvf("x*d/dy", r3), parse_mvf("y*d/dx", r3)
    assert not lie_bracket_residual(x, y, parse_form("dx^dy", r3))


def test_hook_vanishes_when_degree_too_high(r3):
    x, y = parse_mvf("d/dx", r3), parse_mvf("d/dx^d/dy", r3)
    assert not bracket_hook_residual(x, y, parse_form("z*dx", r3))


def test_cartan_k1_is_magic_formula(r3):
    v = parse_mvf("y*d/dx - x*d/dy", r3)
    t = parse_form("x*z*dy + y^2*dz", r3)
    p = Decomposable([v])
    assert not cartan_residual(p, MultiVector.zero(r3, 0), t)
    # with k = 1 the identity reads -d(V -| t) = -L_V t + V -| dt
    assert lie_derivative(v, t) == ext_d(contract(v, t)) + contract(v, ext_d(t))


def test_cartan_commuting_coordinate_fields(r3):
    p = Decomposable([parse_mvf("d/dx", r3), parse_mvf("d/dy", r3)])
    assert not list_boundary(p)
    assert not cartan_residual(p, list_boundary(p), parse_form("x*y*dx^dz + z^2*dy^dz", r3))


def test_contract_list_order(r3):
    a, b = parse_mvf("d/dx", r3), parse_mvf("d/dy", r3)
    t = parse_form("dx^dy", r3)
    assert contract_list([a, b], t) == contract(wedge(a, b), t)


@given(st.data())
def test_schouten_degree_one_is_lie_bracket(data):
    ch = data.draw(charts)
    x, y = data.draw(mvfs(ch, 1)), data.draw(mvfs(ch, 1))
    assert schouten(x, y) == vf_bracket(x, y)
    assert vf_bracket(x, y) == -vf_bracket(y, x)


@given(st.data())
def test_schouten_graded_antisymmetry(data):
    ch = data.draw(charts)
    x, y = data.draw(mvfs(ch)), data.draw(mvfs(ch))
    assert not schouten_antisymmetry_residual(x, y)


@given(st.data())
def test_schouten_graded_leibniz(data):
    ch = data.draw(charts)
    x, y, z = (data.draw(mvfs(ch, max_deg=1)) for _ in range(3))
    assert not schouten_leibniz_residual(x, y, z)


@given(st.data())
def test_schouten_graded_jacobi(data):
    ch = data.draw(charts)
    x, y, z = (data.draw(mvfs(ch, max_deg=1)) for _ in range(3))
    assert not schouten_jacobi_residual(x, y, z)


@given(st.data())
def test_interior_equation(data):
    ch = data.draw(charts)
    x, y = data.draw(mvfs(ch)), data.draw(mvfs(ch))
    t = data.draw(forms(ch))
    assert not interior_bracket_residual(x, y, t)


@given(st.data())
def test_bracket_hook(data):
    ch = data.draw(charts)
    x, y = data.draw(mvfs(ch)), data.draw(mvfs(ch))
    t = data.draw(forms(ch))
    assert not bracket_hook_residual(x, y, t)


@given(st.data())
def test_lie_of_bracket(data):
    ch = data.draw(charts)
    x, y = data.draw(mvfs(ch, max_deg=1)), data.draw(mvfs(ch, max_deg=1))
    t = data.draw(forms(ch))
    assert not lie_bracket_residual(x, y, t)


@given(st.data())
def test_lie_of_wedge_and_dl(data):
    ch = data.draw(charts)
    x, y = data.draw(mvfs(ch)), data.draw(mvfs(ch))
    t = data.draw(forms(ch))
    assert not lie_wedge_residual(x, y, t)
    assert not dl_residual(x, t)


@given(st.data())
def test_extended_cartan_with_list_boundary(data):
    ch = data.draw(charts)
    k = data.draw(st.integers(1, min(3, ch.dim)))
    p = Decomposable([data.draw(mvfs(ch, 1, max_deg=1)) for _ in range(k)], ch)
    t = data.draw(forms(ch))
    assert not cartan_residual(p, list_boundary(p), t)


def test_extended_cartan_detects_wrong_boundary(r3):
    p = Decomposable([parse_mvf("x*d/dy", r3), parse_mvf("d/dx", r3)])
    t = parse_form("dx^dy", r3)
    db = list_boundary(p)
    assert db == parse_mvf("d/dy", r3)
    assert cartan_residual(p, -db, t)
