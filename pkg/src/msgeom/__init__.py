"""Exact symbolic toolkit for multisymplectic geometry and weak moment maps."""

from .symbolic import Chart, Poly
from .exterior import (
    Decomposable,
    Exactness,
    Form,
    MultiVector,
    classify_closed_exact,
    contract,
    ext_d,
    homotopy_k,
    lie_derivative,
    wedge,
)
from .parsing import ParseError, parse_expr, parse_form, parse_mvf, parse_poly

__all__ = [
    "Chart",
    "Poly",
    "Decomposable",
    "Exactness",
    "Form",
    "MultiVector",
    "classify_closed_exact",
    "contract",
    "ext_d",
    "homotopy_k",
    "lie_derivative",
    "wedge",
    "ParseError",
    "parse_expr",
    "parse_form",
    "parse_mvf",
    "parse_poly",
]
