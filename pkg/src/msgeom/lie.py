"""Finite-dimensional Lie algebras, the Chevalley-Eilenberg boundary, Lie kernels
and infinitesimal actions on a chart.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Optional, Sequence, Union

from .brackets import vf_bracket
from .exterior import MultiVector, merge_sign, perm_sign, wedge_all
from .linalg import nullspace, rank
from .parsing import parse_mvf
from .symbolic import Chart, _frac, join_signed

IndexSet = tuple[int, ...]


class LieAlg:
    """Lie algebra given by structure constants ``[e_i, e_j] = sum_k c[i,j][k] e_k``."""

    def __init__(self, names: Sequence[str], brackets: Mapping[tuple[int, int], Mapping[int, Union[int, Fraction]]], label: str = ""):
        self.names = tuple(names)
        self.dim = len(self.names)
        self.label = label or "g"
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), vec in brackets.items():
            vec = {k: _frac(c) for k, c in vec.items() if c}
            if i == j:
                if vec:
                    raise ValueError(f"[e{i + 1},e{i + 1}] must vanish")
                continue
            if (j, i) in table:
                expect = {k: -c for k, c in table[(j, i)].items()}
                if expect != vec:
                    raise ValueError(f"structure constants not antisymmetric at ({i},{j})")
                continue
            table[(i, j)] = vec
            table[(j, i)] = {k: -c for k, c in vec.items()}
        self._table = table
        bad = self.jacobi_failures()
        if bad:
            raise ValueError(f"Jacobi identity fails for basis triples {bad}")

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        return self._table.get((i, j), {})

    def bracket_vec(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    def jacobi_failures(self) -> list[tuple[int, int, int]]:
        bad = []
        for i, j, k in combinations(range(self.dim), 3):
            ei, ej, ek = ({i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)})
            tot: dict[int, Fraction] = {}
            for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                for m, v in self.bracket_vec(self.bracket_vec(a, b), c).items():
                    tot[m] = tot.get(m, 0) + v
            if any(tot.values()):
                bad.append((i, j, k))
        return bad

    def is_abelian(self) -> bool:
        return not any(self._table.values())

    def basis(self, k: int) -> list["GMulti"]:
        return [GMulti(self, k, {idx: 1}) for idx in combinations(range(self.dim), k)]

    def element(self, i: Union[int, str]) -> "GMulti":
        if isinstance(i, str):
            i = self.names.index(i)
        return GMulti(self, 1, {(i,): 1})

    def table_lines(self) -> list[str]:
        """Bracket table as ``[ei,ej] = ...`` lines, i < j, nonzero entries only."""
        lines = []
        for i, j in combinations(range(self.dim), 2):
            vec = self.bracket_basis(i, j)
            if vec:
                rhs = join_signed((c, self.names[k]) for k, c in sorted(vec.items()))
                lines.append(f"[{self.names[i]},{self.names[j]}] = {rhs}")
        return lines

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlg) and self.names == other.names and self._table == other._table

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"LieAlg({self.label}, dim={self.dim})"


class GMulti:
    """Element of the k-th exterior power of a Lie algebra, rational coordinates."""

    __slots__ = ("algebra", "degree", "coords")

    def __init__(self, algebra: LieAlg, degree: int, coords: Mapping[Sequence[int], Union[int, Fraction]] | None = None):
        out: dict[IndexSet, Fraction] = {}
        for idx, c in (coords or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError("index set has wrong degree")
            s = perm_sign(idx)
            if not s:
                continue
            key = tuple(sorted(idx))
            v = out.get(key, Fraction(0)) + s * _frac(c)
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        self.algebra = algebra
        self.degree = degree
        self.coords = out

    def _same(self, other: "GMulti") -> None:
        if not isinstance(other, GMulti) or other.algebra != self.algebra:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other: "GMulti") -> "GMulti":
        self._same(other)
        if not other.coords:
            return self
        if not self.coords:
            return other
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return GMulti(self.algebra, self.degree, out)

    def __neg__(self) -> "GMulti":
        return GMulti(self.algebra, self.degree, {k: -v for k, v in self.coords.items()})

    def __sub__(self, other: "GMulti") -> "GMulti":
        return self + (-other)

    def __mul__(self, c) -> "GMulti":
        c = _frac(c)
        return GMulti(self.algebra, self.degree, {k: v * c for k, v in self.coords.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GMulti):
            return NotImplemented
        if self.algebra != other.algebra:
            return False
        if not self.coords and not other.coords:
            return True
        return self.degree == other.degree and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self.coords.items())))

    def is_zero(self) -> bool:
        return not self.coords

    def vector(self) -> list[Fraction]:
        """Coordinates in the lexicographic basis of the k-th exterior power."""
        return [self.coords.get(idx, Fraction(0)) for idx in combinations(range(self.algebra.dim), self.degree)]

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        names = self.algebra.names
        return join_signed((c, "^".join(names[i] for i in idx) if idx else "") for idx, c in sorted(self.coords.items()))

    def __repr__(self) -> str:
        return f"GMulti({str(self)!r})"


def gwedge(p: GMulti, q: GMulti) -> GMulti:
    p._same(q)
    out: dict[IndexSet, Fraction] = {}
    for i, a in p.coords.items():
        for j, b in q.coords.items():
            s, k = merge_sign(i, j)
            if s:
                out[k] = out.get(k, 0) + s * a * b
    return GMulti(p.algebra, p.degree + q.degree, out)


def ce_boundary(p: GMulti) -> GMulti:
    """``d(x_1^...^x_k) = sum_{i<j} (-1)^(i+j) [x_i,x_j] ^ x_1..^x_i..^x_j..x_k``."""
    g = p.algebra
    k = p.degree
    out: dict[IndexSet, Fraction] = {}
    if k >= 2:
        for idx, c in p.coords.items():
            for i in range(k):
                for j in range(i + 1, k):
                    rest = idx[:i] + idx[i + 1:j] + idx[j + 1:]
                    sign = -1 if (i + j) % 2 else 1
                    for m, s in g.bracket_basis(idx[i], idx[j]).items():
                        ps = perm_sign((m,) + rest)
                        if ps:
                            key = tuple(sorted((m,) + rest))
                            out[key] = out.get(key, 0) + sign * ps * s * c
    return GMulti(g, max(k - 1, 0), out)


def schouten_g(p: GMulti, q: GMulti) -> GMulti:
    """Bracket on the exterior algebra, solved from
    ``d(p^q) = dp^q + (-1)^k p^dq + (-1)^k [p,q]``."""
    p._same(q)
    k = p.degree
    sk = -1 if k % 2 else 1
    lhs = ce_boundary(gwedge(p, q))
    rest = gwedge(ce_boundary(p), q) + sk * gwedge(p, ce_boundary(q))
    out = (lhs - rest) * sk
    if not out.coords:
        return GMulti(p.algebra, max(p.degree + q.degree - 1, 0), {})
    return out


def ad_action(xi: GMulti, p: GMulti) -> GMulti:
    """Derivation extension ``ad_x(y_1^...^y_k) = sum y_1^..^[x,y_i]^..^y_k``."""
    xi._same(p)
    if xi.degree != 1:
        raise ValueError("ad_action needs a degree-one element")
    g = p.algebra
    xv = {i: c for (i,), c in xi.coords.items()}
    out: dict[IndexSet, Fraction] = {}
    for idx, c in p.coords.items():
        for r, a in enumerate(idx):
            for m, s in g.bracket_vec(xv, {a: Fraction(1)}).items():
                new = idx[:r] + (m,) + idx[r + 1:]
                ps = perm_sign(new)
                if ps:
                    key = tuple(sorted(new))
                    out[key] = out.get(key, 0) + ps * s * c
    return GMulti(g, p.degree, out)


def boundary_matrix(g: LieAlg, k: int) -> list[list[Fraction]]:
    """Matrix of the boundary from degree k to k-1 in lexicographic bases."""
    cols = [ce_boundary(b).vector() if k >= 2 else [] for b in g.basis(k)]
    nrows = comb(g.dim, k - 1) if k >= 1 else 0
    return [[col[r] if col else Fraction(0) for col in cols] for r in range(nrows)]


def lie_kernel_basis(g: LieAlg, k: int) -> list[GMulti]:
    if not 0 <= k <= g.dim:
        raise ValueError("degree out of range")
    idxs = list(combinations(range(g.dim), k))
    if k <= 1:
        return g.basis(k)
    vecs = nullspace(boundary_matrix(g, k), len(idxs))
    return [GMulti(g, k, {idx: v for idx, v in zip(idxs, vec) if v}) for vec in vecs]


def express_in(p: GMulti, basis: Sequence[GMulti]) -> Optional[list[Fraction]]:
    """Coordinates of ``p`` in the span of ``basis``, or None if outside."""
    from .linalg import solve

    if not basis:
        return [] if p.is_zero() else None
    cols = [b.vector() for b in basis]
    target = p.vector() if p.coords else [Fraction(0)] * len(cols[0])
    rows = [[col[r] for col in cols] for r in range(len(target))]
    return solve(rows, target)


@dataclass(frozen=True)
class SpanReport:
    span_dim: int
    kernel_dim: int
    equals_kernel: bool


def h0_bracket_span_check(g: LieAlg, k: int) -> SpanReport:
    """Compare ``span{[p, x] : p in kernel, x in g}`` with the k-th Lie kernel."""
    kern = lie_kernel_basis(g, k)
    vecs = []
    for p in kern:
        for xi in g.basis(1):
            br = schouten_g(p, xi)
            vecs.append(br.vector() if br.coords else [Fraction(0)] * comb(g.dim, k))
    r = rank(vecs) if vecs else 0
    return SpanReport(r, len(kern), bool(kern) and r == len(kern))


# ---- text form of exterior-algebra elements ---------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)(?:/(\d+))?\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_]*(?:\s*\^\s*[A-Za-z_][A-Za-z0-9_]*)*)?\s*")


def parse_gmulti(text: str, g: LieAlg) -> GMulti:
    """Parse sums like ``e1^e2 - 1/2*e3^e4`` over the basis names of ``g``."""
    pos = 0
    terms: dict[IndexSet, Fraction] = {}
    degree = None
    text = text.strip()
    if text == "0":
        raise ValueError("the zero element needs an explicit degree")
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse exterior element {text!r} at column {pos + 1}")
        sign, num, den, word = m.groups()
        if not first and sign is None:
            raise ValueError(f"missing operator in {text!r} at column {pos + 1}")
        c = Fraction(int(num or 1), int(den or 1)) * (-1 if sign == "-" else 1)
        names = [w.strip() for w in word.split("^")] if word else []
        try:
            idx = tuple(g.names.index(n) for n in names)
        except ValueError:
            raise ValueError(f"unknown basis element in {text!r}") from None
        if degree is None:
            degree = len(idx)
        elif degree != len(idx):
            raise ValueError(f"inhomogeneous exterior element {text!r}")
        s = perm_sign(idx)
        if s:
            key = tuple(sorted(idx))
            terms[key] = terms.get(key, 0) + s * c
        pos = m.end()
        first = False
    return GMulti(g, degree or 0, terms)


def parse_bracket_table(names: Sequence[str], lines: Sequence[str], label: str = "") -> LieAlg:
    """Build a Lie algebra from lines ``[ei,ej] = sum c*ek``."""
    pat = re.compile(r"\s*\[\s*([A-Za-z_]\w*)\s*,\s*([A-Za-z_]\w*)\s*\]\s*=\s*(.+)$")
    brackets: dict[tuple[int, int], dict[int, Fraction]] = {}
    tmp = LieAlg(names, {}, label)
    for line in lines:
        m = pat.match(line)
        if not m:
            raise ValueError(f"bad bracket table entry {line!r}")
        a, b, rhs = m.groups()
        try:
            i, j = names.index(a), names.index(b)
        except ValueError:
            raise ValueError(f"unknown basis element in {line!r}") from None
        vec = parse_gmulti(rhs, tmp) if rhs.strip() != "0" else GMulti(tmp, 1, {})
        if vec.degree not in (0, 1) or (vec.degree == 0 and vec.coords):
            raise ValueError(f"bracket must be a linear combination of basis elements: {line!r}")
        brackets[(i, j)] = {k[0]: c for k, c in vec.coords.items()}
    return LieAlg(names, brackets, label)


# ---- actions -------------------------------------------------------------------


class ActionModel:
    """Infinitesimal action: one vector field per basis element, anti-homomorphic."""

    def __init__(self, algebra: LieAlg, chart: Chart, generators: Sequence[MultiVector]):
        if len(generators) != algebra.dim:
            raise ValueError("need one generator per basis element")
        for v in generators:
            if v.chart != chart or (v.degree != 1 and v.coeffs):
                raise ValueError("generators must be vector fields on the chart")
        self.algebra = algebra
        self.chart = chart
        self.generators = tuple(MultiVector(chart, 1, v.coeffs) for v in generators)
        bad = self.homomorphism_failures()
        if bad:
            raise ValueError(f"generators violate [V_i,V_j] = -V_[ei,ej] for pairs {bad}")

    def homomorphism_failures(self) -> list[tuple[int, int]]:
        bad = []
        for i, j in combinations(range(self.algebra.dim), 2):
            lhs = vf_bracket(self.generators[i], self.generators[j])
            rhs = self.field_of({k: c for k, c in self.algebra.bracket_basis(i, j).items()})
            if lhs + rhs:
                bad.append((i, j))
        return bad

    def field_of(self, vec: Mapping[int, Fraction]) -> MultiVector:
        out = MultiVector.zero(self.chart, 1)
        for k, c in vec.items():
            out = out + self.generators[k] * c
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ActionModel)
            and self.algebra == other.algebra
            and self.chart == other.chart
            and self.generators == other.generators
        )


def generator_mvf(a: ActionModel, p: GMulti) -> MultiVector:
    """``V_p`` extended linearly from ``V_{x_1} ^ ... ^ V_{x_k}``."""
    if p.algebra != a.algebra:
        raise ValueError("element and action use different algebras")
    if p.degree > a.chart.dim:
        return MultiVector.zero(a.chart, p.degree)
    out = MultiVector.zero(a.chart, p.degree)
    for idx, c in p.coords.items():
        out = out + wedge_all([a.generators[i] for i in idx], a.chart, MultiVector) * c
    return out


def generator_list(a: ActionModel, idx: IndexSet):
    from .exterior import Decomposable

    return Decomposable([a.generators[i] for i in idx], a.chart)


# ---- library -------------------------------------------------------------------


def abelian(n: int) -> LieAlg:
    return LieAlg([f"e{i + 1}" for i in range(n)], {}, f"abelian R^{n}")


def heisenberg() -> LieAlg:
    return LieAlg(["e1", "e2", "e3"], {(0, 1): {2: 1}}, "heisenberg h3")


def so3() -> LieAlg:
    return LieAlg(["e1", "e2", "e3"], {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}, "so(3)")


def se2() -> LieAlg:
    # e1 rotation, e2 and e3 translations
    return LieAlg(["e1", "e2", "e3"], {(0, 1): {2: 1}, (0, 2): {1: -1}}, "se(2)")


def solvable() -> LieAlg:
    # R acting on R^2 by dilation
    return LieAlg(["e1", "e2", "e3"], {(0, 1): {1: 1}, (0, 2): {2: 1}}, "R x R^2")


LIBRARY = {
    "abelian1": lambda: abelian(1),
    "abelian2": lambda: abelian(2),
    "abelian3": lambda: abelian(3),
    "abelian4": lambda: abelian(4),
    "heisenberg": heisenberg,
    "so3": so3,
    "se2": se2,
    "solvable": solvable,
}


def standard_action(name: str) -> ActionModel:
    """A faithful action of a library algebra on a small chart."""
    if name.startswith("abelian"):
        n = int(name[len("abelian"):])
        chart = Chart(tuple(f"x{i + 1}" for i in range(n)))
        gens = [MultiVector.basis(chart, (i,)) for i in range(n)]
        return ActionModel(abelian(n), chart, gens)
    if name == "heisenberg":
        chart = Chart.of("x y z")
        return ActionModel(heisenberg(), chart, [parse_mvf(s, chart) for s in ("d/dx", "d/dy + x*d/dz", "-d/dz")])
    if name == "so3":
        chart = Chart.of("x y z")
        gens = ("y*d/dz - z*d/dy", "z*d/dx - x*d/dz", "x*d/dy - y*d/dx")
        return ActionModel(so3(), chart, [parse_mvf(s, chart) for s in gens])
    if name == "se2":
        chart = Chart.of("x y")
        return ActionModel(se2(), chart, [parse_mvf(s, chart) for s in ("x*d/dy - y*d/dx", "d/dx", "d/dy")])
    if name == "solvable":
        chart = Chart.of("x y")
        return ActionModel(solvable(), chart, [parse_mvf(s, chart) for s in ("x*d/dx + y*d/dy", "d/dx", "d/dy")])
    raise KeyError(f"no standard action for {name!r}")
