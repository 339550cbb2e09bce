from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from msgeom.exterior import Form, MultiVector, index_sets
from msgeom.symbolic import Chart, Poly

settings.register_profile(
    "msgeom",
    max_examples=40,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("msgeom")

CHARTS = {d: Chart(tuple("abcd"[:d])) for d in (2, 3, 4)}

coefficients = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def polys(draw, chart, max_deg=2, max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = [0] * chart.dim
        for _ in range(draw(st.integers(0, max_deg))):
            e[draw(st.integers(0, chart.dim - 1))] += 1
        terms[tuple(e)] = draw(coefficients)
    return Poly(chart, terms)


@st.composite
def graded(draw, cls, chart, degree=None, max_deg=2, min_degree=0):
    k = draw(st.integers(min_degree, chart.dim)) if degree is None else degree
    idxs = index_sets(chart.dim, k)
    picks = draw(st.lists(st.sampled_from(idxs), min_size=0, max_size=min(3, len(idxs)), unique=True))
    return cls(chart, k, {i: draw(polys(chart, max_deg)) for i in picks})


def forms(chart, degree=None, **kw):
    return graded(Form, chart, degree, **kw)


def mvfs(chart, degree=None, **kw):
    if degree is None:
        return st.integers(1, min(3, chart.dim)).flatmap(lambda k: graded(MultiVector, chart, k, **kw))
    return graded(MultiVector, chart, degree, **kw)


charts = st.sampled_from([CHARTS[2], CHARTS[3], CHARTS[4]])


@pytest.fixture
def r3():
    return Chart(("x", "y", "z"))


def frac(a, b=1):
    return Fraction(a, b)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_lines(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
