"""Exact polynomial arithmetic over the rationals on a named coordinate chart."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Scalar = Union[int, Fraction]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Chart:
    """An ordered tuple of coordinate names."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate coordinate names in {names}")
        for n in names:
            if not _IDENT.match(n):
                raise ValueError(f"invalid coordinate name {n!r}")

    @classmethod
    def of(cls, spec: Union[str, Sequence[str]]) -> "Chart":
        """Build from a whitespace separated string or a sequence of names."""
        if isinstance(spec, str):
            spec = spec.split()
        return cls(tuple(spec))

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown coordinate {name!r}") from None

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def _mono_key(e: tuple[int, ...]):
    # graded lex: higher total degree first, then larger leading exponents
    return (-sum(e), tuple(-x for x in e))


class Poly:
    """Polynomial with Fraction coefficients, keyed by exponent tuples.

    Instances are immutable; zero coefficients are never stored.
    """

    __slots__ = ("chart", "terms")

    def __init__(self, chart: Chart, terms: Mapping[tuple[int, ...], Scalar] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        n = chart.dim
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent tuple {e} for chart of dim {n}")
            c = _frac(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.chart = chart
        self.terms = clean

    @classmethod
    def _raw(cls, chart: Chart, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.chart = chart
        p.terms = terms
        return p

    @classmethod
    def zero(cls, chart: Chart) -> "Poly":
        return cls._raw(chart, {})

    @classmethod
    def const(cls, chart: Chart, c: Scalar) -> "Poly":
        c = _frac(c)
        return cls._raw(chart, {(0,) * chart.dim: c} if c else {})

    @classmethod
    def var(cls, chart: Chart, which: Union[int, str]) -> "Poly":
        i = chart.index(which) if isinstance(which, str) else which
        e = [0] * chart.dim
        e[i] = 1
        return cls._raw(chart, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, chart: Chart, exps: Sequence[int], c: Scalar = 1) -> "Poly":
        return cls(chart, {tuple(exps): c})

    # ---- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.chart.dim, Fraction(0))

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.chart != self.chart:
                raise ValueError("polynomials live on different charts")
            return other
        return Poly.const(self.chart, other)

    # ---- arithmetic ------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.chart, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.chart, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            c = _frac(other)
            if not c:
                return Poly.zero(self.chart)
            return Poly._raw(self.chart, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Poly._raw(self.chart, out)

    def __rmul__(self, other) -> "Poly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        out = Poly.const(self.chart, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.chart == other.chart and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Poly.const(self.chart, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.chart, frozenset(self.terms.items())))

    # ---- calculus --------------------------------------------------------

    def partial(self, i: Union[int, str]) -> "Poly":
        if isinstance(i, str):
            i = self.chart.index(i)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return Poly._raw(self.chart, out)

    def eval(self, point: Union[Sequence[Scalar], Mapping[str, Scalar]]) -> Fraction:
        """Evaluate exactly at a point given by position or by name."""
        if isinstance(point, Mapping):
            point = [point[n] for n in self.chart.names]
        if len(point) != self.chart.dim:
            raise ValueError("point dimension does not match chart")
        pt = [_frac(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def ray_integral(self, a: int) -> "Poly":
        """The polynomial x -> integral over t in [0,1] of t^a p(t x)."""
        if a < 0:
            raise ValueError("ray integral weight must be non-negative")
        return Poly._raw(self.chart, {e: c / (a + sum(e) + 1) for e, c in self.terms.items()})

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Compose with a polynomial map given by one image per coordinate."""
        if len(images) != self.chart.dim:
            raise ValueError("need one image per coordinate")
        target = images[0].chart if images else self.chart
        out = Poly.zero(target)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            out = out + term
        return out

    def rechart(self, chart: Chart, positions: Sequence[int]) -> "Poly":
        """Embed into a larger chart; coordinate i goes to slot positions[i]."""
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * chart.dim
            for k, pos in zip(e, positions):
                e2[pos] = k
            out[tuple(e2)] = c
        return Poly._raw(chart, out)

    # ---- printing --------------------------------------------------------

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))

    def mono_str(self, e: tuple[int, ...]) -> str:
        parts = []
        for name, k in zip(self.chart.names, e):
            if k == 1:
                parts.append(name)
            elif k > 1:
                parts.append(f"{name}^{k}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = [(c, self.mono_str(e)) for e, c in self.sorted_terms()]
        return join_signed(pieces)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


def fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def join_signed(pieces: Iterable[tuple[Fraction, str]]) -> str:
    """Render coefficient/atom pairs as a canonical signed sum."""
    out = []
    for c, atom in pieces:
        neg = c < 0
        a = -c if neg else c
        if not atom:
            body = fmt_rational(a)
        elif a == 1:
            body = atom
        else:
            body = f"{fmt_rational(a)}*{atom}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_partial(p: Poly, i: Union[int, str]) -> Poly:
    return p.partial(i)


def poly_eval(p: Poly, point) -> Fraction:
    return p.eval(point)


def poly_ray_integral(p: Poly, a: int) -> Poly:
    return p.ray_integral(a)
