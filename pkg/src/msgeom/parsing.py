"""Recursive descent parser for polynomials, forms and multivector fields.

Grammar (whitespace insensitive)::

    expr      := ['+'|'-'] term (('+'|'-') term)*
    term      := factor ('*' factor)*
    factor    := rational | ident | ident '^' nat | '(' expr ')' | wedgeatom
    wedgeatom := basis ('^' basis)*
    basis     := 'd' ident | 'd/d' ident
    rational  := int ('/' nat)?

A product of two form-valued (or two vector-valued) factors is their wedge.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exterior import Form, MultiVector, _Graded, wedge
from .symbolic import Chart, Poly

Expr = Union[Poly, Form, MultiVector]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<vbasis>d/d[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<num>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
)


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "ws":
            nl = s.count("\n")
            if nl:
                line += nl
                line_start = pos + s.rindex("\n") + 1
        else:
            out.append(Token(kind, s, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, len(text) - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.toks = tokenize(text)
        self.pos = 0
        self.chart = chart

    def peek(self) -> Token:
        return self.toks[self.pos]

    def take(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            self.error(f"expected {text!r}, found {t.text or 'end of input'!r}")
        return self.take()

    # expr := ['+'|'-'] term (('+'|'-') term)*
    def expr(self) -> Expr:
        t = self.peek()
        neg = False
        if t.text in "+-" and t.kind == "op":
            neg = self.take().text == "-"
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            op = self.take()
            rhs = self.term()
            acc = self.combine_sum(acc, rhs, op)
        return acc

    def combine_sum(self, a: Expr, b: Expr, op: Token) -> Expr:
        if op.text == "-":
            b = -b
        if isinstance(a, Poly) and isinstance(b, Poly):
            return a + b
        a, b = self._lift_zero(a, b)
        if type(a) is not type(b):
            self.error("cannot add a polynomial and a graded object", op)
        if a.coeffs and b.coeffs and a.degree != b.degree:
            self.error(f"inhomogeneous sum of degrees {a.degree} and {b.degree}", op)
        return a + b

    @staticmethod
    def _lift_zero(a: Expr, b: Expr):
        # a bare zero polynomial may be added to anything
        if isinstance(a, Poly) and not a and isinstance(b, _Graded):
            a = type(b).zero(b.chart, b.degree)
        if isinstance(b, Poly) and not b and isinstance(a, _Graded):
            b = type(a).zero(a.chart, a.degree)
        return a, b

    def term(self) -> Expr:
        acc = self.factor()
        while self.peek().text == "*" and self.peek().kind == "op":
            op = self.take()
            rhs = self.factor()
            acc = self.combine_product(acc, rhs, op)
        return acc

    def combine_product(self, a: Expr, b: Expr, op: Token) -> Expr:
        if isinstance(a, Poly):
            return b * a
        if isinstance(b, Poly):
            return a * b
        if type(a) is not type(b):
            self.error("cannot mix form and vector bases in one product", op)
        return wedge(a, b)

    def factor(self) -> Expr:
        t = self.peek()
        if t.kind == "num":
            return self.rational()
        if t.kind == "op" and t.text == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "vbasis":
            return self.wedge_atom()
        if t.kind == "ident":
            if t.text in self.chart.names:
                self.take()
                p = Poly.var(self.chart, t.text)
                if self.peek().text == "^":
                    self.take()
                    n = self.peek()
                    if n.kind != "num":
                        self.error("exponent must be a natural number", n)
                    self.take()
                    p = p ** int(n.text)
                return p
            if t.text.startswith("d") and t.text[1:] in self.chart.names:
                return self.wedge_atom()
            self.error(f"unknown coordinate {t.text!r}", t)
        self.error(f"unexpected {t.text or 'end of input'!r}", t)

    def rational(self) -> Poly:
        n = self.take()
        val = Fraction(int(n.text))
        if self.peek().text == "/":
            self.take()
            d = self.peek()
            if d.kind != "num":
                self.error("expected a denominator", d)
            self.take()
            if int(d.text) == 0:
                self.error("zero denominator", d)
            val /= int(d.text)
        return Poly.const(self.chart, val)

    def basis(self) -> tuple[str, int]:
        t = self.take()
        if t.kind == "vbasis":
            name = t.text[3:]
            if name not in self.chart.names:
                self.error(f"unknown coordinate {name!r}", t)
            return "mvf", self.chart.index(name)
        if t.kind == "ident" and t.text.startswith("d") and t.text[1:] in self.chart.names:
            return "form", self.chart.index(t.text[1:])
        self.error("expected a basis element", t)

    def wedge_atom(self) -> Expr:
        kind, i = self.basis()
        idx = [i]
        while self.peek().text == "^":
            self.take()
            t = self.peek()
            k, j = self.basis()
            if k != kind:
                self.error("cannot mix d and d/d bases in one wedge", t)
            idx.append(j)
        cls = Form if kind == "form" else MultiVector
        if len(set(idx)) != len(idx):
            return cls.zero(self.chart, len(idx))
        return cls.basis(self.chart, idx)

    def parse(self) -> Expr:
        e = self.expr()
        t = self.peek()
        if t.kind != "eof":
            self.error(f"unexpected {t.text!r}", t)
        return e


def parse_expr(text: str, chart: Chart) -> Expr:
    """Parse a polynomial, form or multivector field over ``chart``."""
    return _Parser(text, chart).parse()


def _as_graded(text: str, chart: Chart, cls, degree: int | None):
    e = parse_expr(text, chart)
    if isinstance(e, Poly):
        e = cls.from_poly(e)
    if not isinstance(e, cls):
        raise ValueError(f"expected a {cls.kind}, got a {e.kind}: {text!r}")
    if not e.coeffs:
        return cls.zero(chart, e.degree if degree is None else degree)
    if degree is not None and e.degree != degree:
        raise ValueError(f"expected degree {degree}, got {e.degree}")
    return e


def parse_form(text: str, chart: Chart, degree: int | None = None) -> Form:
    return _as_graded(text, chart, Form, degree)


def parse_mvf(text: str, chart: Chart, degree: int | None = None) -> MultiVector:
    return _as_graded(text, chart, MultiVector, degree)


def parse_poly(text: str, chart: Chart) -> Poly:
    e = parse_expr(text, chart)
    if not isinstance(e, Poly):
        raise ValueError(f"expected a polynomial: {text!r}")
    return e
