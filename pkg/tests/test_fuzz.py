import pytest

from msgeom import fuzz
from msgeom.fuzz import SUITES, Gen, run_suite
from msgeom.exterior import Form
from msgeom.symbolic import Poly


@pytest.mark.parametrize("suite", sorted(SUITES))
@pytest.mark.parametrize("seed", [2, 17])
def test_suites_pass(suite, seed):
    res = run_suite(suite, 25, seed)
    assert res.ok, res.failures[:3]
    assert res.passed == 25


def test_runs_are_reproducible():
    a, b = Gen(5), Gen(5)
    for _ in range(10):
        c = a.chart()
        assert c == b.chart()
        assert a.form(c) == b.form(c)
        assert a.mvf(c) == b.mvf(c)


def test_generator_respects_bounds():
    g = Gen(0, max_dim=3, max_deg=1)
    for _ in range(100):
        c = g.chart()
        assert 2 <= c.dim <= 3
        x = g.mvf(c)
        assert 1 <= x.degree <= min(3, c.dim)
        for coeff in x.coeffs.values():
            assert coeff.total_degree() <= 1


def test_generator_rejects_tiny_dimension():
    with pytest.raises(ValueError):
        Gen(0, max_dim=1)


def test_plectic_forms_are_nondegenerate_choices():
    g = Gen(3)
    degrees = {g.plectic().degree for _ in range(30)}
    assert degrees == {2, 3, 4}


def test_unknown_suite_and_bad_count():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("nope", 1, 0)
    with pytest.raises(ValueError):
        run_suite("homotopy", 0, 0)


def test_failures_are_reported(monkeypatch):
    def broken(g):
        c = g.chart()
        return [("always", Form(c, 0, {(): Poly.const(c, 1)})), ("never", Form.zero(c, 0))]

    monkeypatch.setitem(fuzz.SUITES, "broken", broken)
    res = run_suite("broken", 3, 0)
    assert not res.ok
    assert res.passed == 0
    assert [f[:2] for f in res.failures] == [(0, "always"), (1, "always"), (2, "always")]
