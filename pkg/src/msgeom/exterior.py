"""Differential forms and multivector fields with polynomial coefficients.

Both are stored as maps from strictly increasing index tuples to ``Poly``.
Contraction follows the convention ``(X1^...^Xk) -| t = Xk -| ... -| X1 -| t``,
so the first factor is inserted first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator, Mapping, Optional, Sequence, Union

from .symbolic import Chart, Poly, Scalar, _frac, join_signed

IndexSet = tuple[int, ...]


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    s = 1
    n = len(seq)
    for i in range(n):
        a = seq[i]
        for j in range(i + 1, n):
            b = seq[j]
            if a > b:
                s = -s
            elif a == b:
                return 0
    return s


@lru_cache(maxsize=None)
def merge_sign(i: IndexSet, j: IndexSet) -> tuple[int, IndexSet]:
    """Sign and sorted union for ``dx^I ^ dx^J``; sign 0 when they overlap."""
    s = perm_sign(i + j)
    if not s:
        return 0, ()
    return s, tuple(sorted(i + j))


@lru_cache(maxsize=None)
def interior_sign(j: IndexSet, i: IndexSet) -> tuple[int, IndexSet]:
    """Insert basis vectors ``j[0], j[1], ...`` in turn into ``dx^I``."""
    rest = list(i)
    s = 1
    for a in j:
        try:
            pos = rest.index(a)
        except ValueError:
            return 0, ()
        if pos % 2:
            s = -s
        del rest[pos]
    return s, tuple(rest)


class _Graded:
    """Shared storage and linear structure for forms and multivector fields."""

    __slots__ = ("chart", "degree", "coeffs")
    kind = ""

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping[Sequence[int], Poly] | None = None):
        if degree < 0:
            raise ValueError("degree must be non-negative")
        clean: dict[IndexSet, Poly] = {}
        for idx, p in (coeffs or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index set {idx} does not have degree {degree}")
            if any(a < 0 or a >= chart.dim for a in idx):
                raise ValueError(f"index out of range in {idx}")
            if not isinstance(p, Poly):
                p = Poly.const(chart, p)
            elif p.chart != chart:
                raise ValueError("coefficient lives on a different chart")
            s = perm_sign(idx)
            if not s:
                continue
            key = tuple(sorted(idx))
            val = clean.get(key, Poly.zero(chart)) + (p if s > 0 else -p)
            if val:
                clean[key] = val
            else:
                clean.pop(key, None)
        self.chart = chart
        self.degree = degree
        self.coeffs = clean

    @classmethod
    def _raw(cls, chart: Chart, degree: int, coeffs: dict):
        obj = object.__new__(cls)
        obj.chart = chart
        obj.degree = degree
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, chart: Chart, degree: int):
        return cls._raw(chart, degree, {})

    @classmethod
    def basis(cls, chart: Chart, idx: Sequence[Union[int, str]], coeff: Union[Poly, Scalar] = 1):
        idx = tuple(chart.index(a) if isinstance(a, str) else a for a in idx)
        return cls(chart, len(idx), {idx: coeff})

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p.chart, 0, {(): p})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def coeff(self, idx: Sequence[int]) -> Poly:
        return self.coeffs.get(tuple(idx), Poly.zero(self.chart))

    def items(self) -> Iterator[tuple[IndexSet, Poly]]:
        return iter(sorted(self.coeffs.items()))

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {self.kind} with {getattr(other, 'kind', type(other).__name__)}")
        if other.chart != self.chart:
            raise ValueError("operands live on different charts")
        if other.degree != self.degree and self.coeffs and other.coeffs:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        out = dict(self.coeffs)
        for k, p in other.coeffs.items():
            v = out[k] + p if k in out else p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return type(self)._raw(self.chart, self.degree, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.chart, self.degree, {k: -p for k, p in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if isinstance(c, _Graded):
            return NotImplemented
        if isinstance(c, Poly):
            if c.chart != self.chart:
                raise ValueError("scalar lives on a different chart")
        elif isinstance(c, (int, Fraction)):
            c = _frac(c)
        else:
            return NotImplemented
        out = {}
        for k, p in self.coeffs.items():
            v = p * c
            if v:
                out[k] = v
        return type(self)._raw(self.chart, self.degree, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        if type(other) is not type(self):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if not self.coeffs and not other.coeffs:
            return True
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.kind, self.chart, self.degree, frozenset(self.coeffs.items())))

    def eval(self, point) -> dict[IndexSet, Fraction]:
        out = {}
        for k, p in self.coeffs.items():
            v = p.eval(point)
            if v:
                out[k] = v
        return out

    def map_coeffs(self, f):
        out = {}
        for k, p in self.coeffs.items():
            v = f(p)
            if v:
                out[k] = v
        return type(self)._raw(self.chart, self.degree, out)

    def basis_str(self, idx: IndexSet) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for idx, p in sorted(self.coeffs.items()):
            b = self.basis_str(idx)
            for e, c in p.sorted_terms():
                m = p.mono_str(e)
                atom = "*".join(x for x in (m, b) if x)
                pieces.append((c, atom))
        return join_signed(pieces)

    def __repr__(self) -> str:
        return f"{type(self).__name__}[{self.degree}]({str(self)!r})"


class Form(_Graded):
    """A differential form of fixed degree."""

    __slots__ = ()
    kind = "form"

    def basis_str(self, idx: IndexSet) -> str:
        return "^".join("d" + self.chart.names[a] for a in idx)


class MultiVector(_Graded):
    """A multivector field of fixed degree."""

    __slots__ = ()
    kind = "mvf"

    def basis_str(self, idx: IndexSet) -> str:
        return "^".join("d/d" + self.chart.names[a] for a in idx)


def vector_field(chart: Chart, components: Sequence[Union[Poly, Scalar]]) -> MultiVector:
    """Degree-one multivector from its coefficient list."""
    if len(components) != chart.dim:
        raise ValueError("need one component per coordinate")
    return MultiVector(chart, 1, {(i,): c for i, c in enumerate(components)})


def one_form(chart: Chart, components: Sequence[Union[Poly, Scalar]]) -> Form:
    if len(components) != chart.dim:
        raise ValueError("need one component per coordinate")
    return Form(chart, 1, {(i,): c for i, c in enumerate(components)})


def components(v: _Graded) -> list[Poly]:
    """Coefficient list of a degree-one form or vector field."""
    if v.degree != 1:
        raise ValueError("components are defined for degree one only")
    return [v.coeff((i,)) for i in range(v.chart.dim)]


def function_of(t: Form) -> Poly:
    """The coefficient of a degree-zero form."""
    if t.degree != 0 and t.coeffs:
        raise ValueError("not a degree-zero form")
    return t.coeff(())


def wedge(a: _Graded, b: _Graded) -> _Graded:
    if type(a) is not type(b):
        raise TypeError("wedge needs two forms or two multivector fields")
    if a.chart != b.chart:
        raise ValueError("operands live on different charts")
    deg = a.degree + b.degree
    out: dict[IndexSet, Poly] = {}
    if deg <= a.chart.dim:
        for i, p in a.coeffs.items():
            for j, q in b.coeffs.items():
                s, k = merge_sign(i, j)
                if not s:
                    continue
                v = p * q
                if s < 0:
                    v = -v
                if k in out:
                    v = out[k] + v
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
    return type(a)._raw(a.chart, deg, out)


def wedge_all(items: Sequence[_Graded], chart: Optional[Chart] = None, kind=MultiVector) -> _Graded:
    """Wedge product of a list; the empty product is the constant 1."""
    if not items:
        if chart is None:
            raise ValueError("empty wedge needs a chart")
        return kind(chart, 0, {(): 1})
    out = items[0]
    for it in items[1:]:
        out = wedge(out, it)
    return out


def contract(x: MultiVector, t: Form) -> Form:
    """Insert ``x`` into ``t``; zero when deg x exceeds deg t."""
    if not isinstance(x, MultiVector) or not isinstance(t, Form):
        raise TypeError("contract takes a multivector field and a form")
    if x.chart != t.chart:
        raise ValueError("operands live on different charts")
    deg = t.degree - x.degree
    if deg < 0:
        return Form.zero(t.chart, 0)
    out: dict[IndexSet, Poly] = {}
    for j, p in x.coeffs.items():
        for i, q in t.coeffs.items():
            s, k = interior_sign(j, i)
            if not s:
                continue
            v = p * q
            if s < 0:
                v = -v
            if k in out:
                v = out[k] + v
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return Form._raw(t.chart, deg, out)


def ext_d(t: Form) -> Form:
    """Exterior derivative."""
    chart = t.chart
    out: dict[IndexSet, Poly] = {}
    for idx, p in t.coeffs.items():
        for j in range(chart.dim):
            if j in idx:
                continue
            dp = p.partial(j)
            if not dp:
                continue
            pos = sum(1 for a in idx if a < j)
            k = idx[:pos] + (j,) + idx[pos:]
            if pos % 2:
                dp = -dp
            v = out[k] + dp if k in out else dp
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return Form._raw(chart, t.degree + 1, out)


def lie_derivative(x: MultiVector, t: Form) -> Form:
    """``L_X t = d(X -| t) - (-1)^k X -| dt`` for X of degree k."""
    k = x.degree
    a = ext_d(contract(x, t))
    b = contract(x, ext_d(t))
    deg = t.degree - k + 1
    out = a - b if k % 2 == 0 else a + b
    if deg < 0:
        return Form.zero(t.chart, 0)
    if not out.coeffs:
        return Form.zero(t.chart, deg)
    return out


def homotopy_k(t: Form) -> Form:
    """Radial homotopy operator with ``d K + K d = id`` on positive degree."""
    k = t.degree
    if k == 0:
        raise ValueError("the homotopy operator needs a form of positive degree")
    chart = t.chart
    out: dict[IndexSet, Poly] = {}
    for idx, p in t.coeffs.items():
        ray = p.ray_integral(k - 1)
        for r, a in enumerate(idx):
            term = ray * Poly.var(chart, a)
            if r % 2:
                term = -term
            rest = idx[:r] + idx[r + 1:]
            v = out[rest] + term if rest in out else term
            if v:
                out[rest] = v
            else:
                out.pop(rest, None)
    return Form._raw(chart, k - 1, out)


class Exactness(enum.Enum):
    NOT_CLOSED = "NotClosed"
    CLOSED_EXACT = "ClosedExact"
    CLOSED_DEG0_CONSTANT = "ClosedDeg0Constant"
    ZERO = "Zero"


@dataclass(frozen=True)
class ExactnessReport:
    kind: Exactness
    primitive: Optional[Form] = None

    def __str__(self) -> str:
        if self.kind is Exactness.CLOSED_EXACT:
            return f"ClosedExact(primitive = {self.primitive})"
        return self.kind.value


def classify_closed_exact(t: Form) -> ExactnessReport:
    """Closed polynomial forms of positive degree on a chart are exact."""
    if not t.coeffs:
        return ExactnessReport(Exactness.ZERO)
    if ext_d(t):
        return ExactnessReport(Exactness.NOT_CLOSED)
    if t.degree == 0:
        return ExactnessReport(Exactness.CLOSED_DEG0_CONSTANT)
    prim = homotopy_k(t)
    if ext_d(prim) != t:
        raise ArithmeticError("homotopy primitive failed to reproduce a closed form")
    return ExactnessReport(Exactness.CLOSED_EXACT, prim)


class Decomposable:
    """Ordered list of vector fields standing for their wedge product."""

    __slots__ = ("factors", "chart")

    def __init__(self, factors: Sequence[MultiVector], chart: Optional[Chart] = None):
        factors = tuple(factors)
        for f in factors:
            if not isinstance(f, MultiVector) or (f.degree != 1 and f.coeffs):
                raise ValueError("decomposable factors must be vector fields")
        if chart is None:
            if not factors:
                raise ValueError("empty decomposable needs a chart")
            chart = factors[0].chart
        self.factors = factors
        self.chart = chart

    @property
    def degree(self) -> int:
        return len(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, i):
        return self.factors[i]

    def omit(self, *positions: int) -> "Decomposable":
        drop = set(positions)
        return Decomposable([f for i, f in enumerate(self.factors) if i not in drop], self.chart)

    def to_mvf(self) -> MultiVector:
        return wedge_all(list(self.factors), self.chart, MultiVector)

    def contract(self, t: Form) -> Form:
        for f in self.factors:
            t = contract(f, t)
        return t

    def __repr__(self) -> str:
        return "Decomposable(" + ", ".join(str(f) for f in self.factors) + ")"


def index_sets(n: int, k: int) -> list[IndexSet]:
    return list(combinations(range(n), k))


def volume_form(chart: Chart) -> Form:
    return Form(chart, chart.dim, {tuple(range(chart.dim)): 1})
