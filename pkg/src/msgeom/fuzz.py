"""Seeded random instances for the identity residuals."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .brackets import (
    bracket_hook_residual,
    cartan_residual,
    dl_residual,
    interior_bracket_residual,
    lie_bracket_residual,
    lie_wedge_residual,
    list_boundary,
    schouten_antisymmetry_residual,
    schouten_jacobi_residual,
    schouten_leibniz_residual,
)
from .exterior import Decomposable, Form, MultiVector, ext_d, homotopy_k, index_sets, volume_form
from .noether import conserved_interior_residual, noether_residual
from .plectic import HamPair, PlecticSystem, hamiltonian_solve, jacobi_residual, poisson_schouten_residual, rogers_residual
from .symbolic import Chart, Poly

_NAMES = "abcdefgh"


class Gen:
    """Random polynomials, forms and multivector fields on small charts."""

    def __init__(self, seed: int, max_dim: int = 4, max_deg: int = 2, max_mv: int = 3):
        if max_dim < 2:
            raise ValueError("max_dim must be at least 2")
        self.rng = random.Random(seed)
        self.max_dim = min(max_dim, len(_NAMES))
        self.max_deg = max_deg
        self.max_mv = max_mv

    def chart(self, dim: int | None = None) -> Chart:
        d = dim or self.rng.randint(2, self.max_dim)
        return Chart(tuple(_NAMES[:d]))

    def poly(self, chart: Chart, nterms: int = 3) -> Poly:
        terms = {}
        for _ in range(nterms):
            e = [0] * chart.dim
            for _ in range(self.rng.randint(0, self.max_deg)):
                e[self.rng.randrange(chart.dim)] += 1
            terms[tuple(e)] = self.rng.randint(-3, 3)
        return Poly(chart, terms)

    def graded(self, cls, chart: Chart, k: int, nidx: int = 2):
        idxs = index_sets(chart.dim, k)
        picks = self.rng.sample(idxs, min(nidx, len(idxs)))
        return cls(chart, k, {i: self.poly(chart) for i in picks})

    def form(self, chart: Chart, k: int | None = None) -> Form:
        k = self.rng.randint(0, chart.dim) if k is None else k
        return self.graded(Form, chart, k)

    def mvf(self, chart: Chart, k: int | None = None) -> MultiVector:
        k = self.rng.randint(1, min(self.max_mv, chart.dim)) if k is None else k
        return self.graded(MultiVector, chart, k)

    def sign(self) -> int:
        return self.rng.choice((1, -1))

    def ham_pair(self, omega: Form, degree: int | None = None) -> HamPair:
        """A Hamiltonian pair for a volume or constant symplectic omega, random stored sign."""
        n = omega.degree - 1
        if degree is None:
            degree = self.rng.randint(max(0, n - self.max_mv), n - 1)
        alpha = self.form(omega.chart, degree)
        sol = hamiltonian_solve(alpha, omega, self.sign())
        if sol is None:
            raise ArithmeticError("random form was not Hamiltonian")
        return sol.pair

    def plectic(self) -> Form:
        """Volume form on R^3 or R^4, or the standard symplectic form on R^4."""
        choice = self.rng.randrange(3 if self.max_dim >= 4 else 1)
        if choice == 0:
            return volume_form(self.chart(3))
        c = self.chart(4)
        if choice == 1:
            return volume_form(c)
        return Form(c, 2, {(0, 2): Poly.const(c, 1), (1, 3): Poly.const(c, 1)})


Instance = list[tuple[str, object]]


def _cartan(g: Gen) -> Instance:
    c = g.chart()
    x = g.mvf(c)
    y = g.mvf(c)
    t = g.form(c)
    k = g.rng.randint(1, min(g.max_mv, c.dim))
    p = Decomposable([g.mvf(c, 1) for _ in range(k)], c)
    return [
        ("dL", dl_residual(x, t)),
        ("bracket_hook", bracket_hook_residual(x, y, t)),
        ("lie_bracket", lie_bracket_residual(x, y, t)),
        ("lie_wedge", lie_wedge_residual(x, y, t)),
        ("interior", interior_bracket_residual(x, y, t)),
        ("extended_cartan", cartan_residual(p, list_boundary(p), t)),
    ]


def _schouten(g: Gen) -> Instance:
    c = g.chart()
    x, y, z = g.mvf(c), g.mvf(c), g.mvf(c, g.rng.randint(1, 2))
    return [
        ("antisymmetry", schouten_antisymmetry_residual(x, y)),
        ("leibniz", schouten_leibniz_residual(x, y, z)),
        ("jacobi", schouten_jacobi_residual(x, y, z)),
    ]


def _jacobi(g: Gen) -> Instance:
    om = g.plectic()
    a, b, c = (g.ham_pair(om) for _ in range(3))
    return [
        ("poisson_jacobi", jacobi_residual(a, b, c, om)),
        ("poisson_schouten", poisson_schouten_residual(a, b, om)),
    ]


def _rogers(g: Gen) -> Instance:
    om = g.plectic()
    n = om.degree - 1
    m = g.rng.randint(2, min(3, n + 1))
    pairs = [g.ham_pair(om, n - 1) for _ in range(m)]
    return [(f"rogers_{m}", rogers_residual(pairs, om))]


def _noether(g: Gen) -> Instance:
    om = g.plectic()
    n = om.degree - 1
    h = g.ham_pair(om, n - 1)
    system = PlecticSystem(om, h.form, h.field, h.sign)
    a = g.ham_pair(om)
    res = noether_residual(a, system)
    return [
        ("noether_1", res.res1),
        ("noether_2", res.res2),
        ("conserved_interior", conserved_interior_residual(a, system)),
    ]


def _homotopy(g: Gen) -> Instance:
    c = g.chart()
    t = g.form(c, g.rng.randint(1, c.dim))
    return [("dK+Kd", ext_d(homotopy_k(t)) + homotopy_k(ext_d(t)) - t)]


SUITES: dict[str, Callable[[Gen], Instance]] = {
    "cartan": _cartan,
    "schouten": _schouten,
    "jacobi": _jacobi,
    "rogers": _rogers,
    "noether": _noether,
    "homotopy": _homotopy,
}


@dataclass
class FuzzResult:
    suite: str
    count: int
    seed: int
    passed: int = 0
    failures: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.passed == self.count


def run_suite(suite: str, count: int, seed: int, max_dim: int = 4, max_deg: int = 2) -> FuzzResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if count < 1:
        raise ValueError("count must be at least 1")
    gen = Gen(seed, max_dim, max_deg)
    out = FuzzResult(suite, count, seed)
    for i in range(count):
        bad = [(name, str(r)) for name, r in SUITES[suite](gen) if r]
        if bad:
            out.failures.extend((i, name, text) for name, text in bad)
        else:
            out.passed += 1
    return out
