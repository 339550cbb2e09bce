"""The flat G2 structure on R^7: Hodge star, cross product, curl and the
splitting of 2-forms into the 7- and 14-dimensional pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

from .exterior import Form, MultiVector, contract, ext_d, index_sets, perm_sign, wedge
from .parsing import parse_form
from .plectic import HamPair, hamiltonian_verify, poisson
from .symbolic import Chart, Poly

FLAT7 = "Flat7"
RPLUSC3 = "RPlusC3"

_FLAT_CHART = Chart(tuple(f"x{i}" for i in range(1, 8)))
_C3_CHART = Chart(("t", "x1", "x2", "x3", "y1", "y2", "y3"))

_FLAT_PHI = "dx1^dx2^dx3 + dx1^dx4^dx5 - dx1^dx6^dx7 + dx2^dx4^dx6 + dx2^dx5^dx7 + dx3^dx4^dx7 - dx3^dx5^dx6"
# Re(dz1^dz2^dz3) - dt^(dx1^dy1 + dx2^dy2 + dx3^dy3)
_C3_PHI = (
    "dx1^dx2^dx3 - dx1^dy2^dy3 - dy1^dx2^dy3 - dy1^dy2^dx3"
    " - dt^dx1^dy1 - dt^dx2^dy2 - dt^dx3^dy3"
)
_C3_VOL = "dt^dx1^dy1^dx2^dy2^dx3^dy3"

# chart position in RPlusC3 of each Flat7 coordinate: (t, y1, x1, y3, x3, x2, y2)
FLAT_TO_C3 = (0, 4, 1, 6, 3, 2, 5)


@dataclass(frozen=True)
class G2Structure:
    presentation: str
    chart: Chart
    phi: Form
    vol: Form

    @cached_property
    def orientation(self) -> int:
        return 1 if self.vol.coeff(tuple(range(7))) == 1 else -1

    @cached_property
    def metric(self) -> list[list[Fraction]]:
        return [[Fraction(int(i == j)) for j in range(7)] for i in range(7)]

    @cached_property
    def psi(self) -> Form:
        return hodge_star(self.phi, self)

    @cached_property
    def phi_tensor(self) -> dict[tuple[int, int, int], Fraction]:
        """Fully antisymmetric components ``phi_ijk`` (only nonzero entries)."""
        out = {}
        for idx, c in self.phi.coeffs.items():
            v = c.constant_term()
            a, b, d = idx
            for perm in ((a, b, d), (b, d, a), (d, a, b), (b, a, d), (a, d, b), (d, b, a)):
                out[perm] = perm_sign(perm) * v
        return out


def standard_g2(presentation: str = FLAT7) -> G2Structure:
    if presentation == FLAT7:
        chart = _FLAT_CHART
        g2 = G2Structure(FLAT7, chart, parse_form(_FLAT_PHI, chart), Form.basis(chart, range(7)))
    elif presentation == RPLUSC3:
        chart = _C3_CHART
        g2 = G2Structure(RPLUSC3, chart, parse_form(_C3_PHI, chart), parse_form(_C3_VOL, chart))
    else:
        raise ValueError(f"unknown presentation {presentation!r}")
    if ext_d(g2.phi):
        raise ArithmeticError("phi is not closed")
    return g2


def _check(t, g2: G2Structure) -> None:
    if t.chart != g2.chart:
        raise ValueError("object and G2 structure use different charts")


def hodge_star(t: Form, g2: G2Structure) -> Form:
    """Euclidean Hodge star: ``e_I ^ *e_I = vol`` on basis forms."""
    _check(t, g2)
    k = t.degree
    out = {}
    for idx, c in t.coeffs.items():
        rest = tuple(i for i in range(7) if i not in idx)
        out[rest] = c * (perm_sign(idx + rest) * g2.orientation)
    return Form(g2.chart, 7 - k, out)


def flat(x: MultiVector, g2: G2Structure) -> Form:
    _check(x, g2)
    if x.degree != 1 and x.coeffs:
        raise ValueError("flat takes a vector field")
    return Form(g2.chart, 1, dict(x.coeffs))


def sharp(a: Form, g2: G2Structure) -> MultiVector:
    _check(a, g2)
    if a.degree != 1 and a.coeffs:
        raise ValueError("sharp takes a 1-form")
    return MultiVector(g2.chart, 1, dict(a.coeffs))


def cross(x: MultiVector, y: MultiVector, g2: G2Structure) -> MultiVector:
    """``X x Y`` with ``g(X x Y, Z) = phi(X, Y, Z)``."""
    for v in (x, y):
        _check(v, g2)
        if v.degree != 1 and v.coeffs:
            raise ValueError("cross takes vector fields")
    return sharp(contract(y, contract(x, g2.phi)), g2)


def curl(x: MultiVector, g2: G2Structure) -> MultiVector:
    """``(curl X)^flat = *(d X^flat ^ psi)``."""
    return sharp(hodge_star(wedge(ext_d(flat(x, g2)), g2.psi), g2), g2)


def curl_coordinates(x: MultiVector, g2: G2Structure) -> MultiVector:
    """``curl(X)^l = (d_a X_b) phi_abl`` for the flat metric."""
    _check(x, g2)
    c = g2.chart
    comps = [x.coeff((i,)) for i in range(7)]
    out = {}
    for l in range(7):
        acc = Poly.zero(c)
        for (a, b, ll), v in g2.phi_tensor.items():
            if ll == l and comps[b]:
                acc = acc + comps[b].partial(a) * v
        if acc:
            out[(l,)] = acc
    return MultiVector(c, 1, out)


def _two_form(a: Form, g2: G2Structure) -> None:
    _check(a, g2)
    if a.degree != 2 and a.coeffs:
        raise ValueError("expected a 2-form")


def pi7(a: Form, g2: G2Structure) -> Form:
    """``(a - *(phi ^ a)) / 3``."""
    _two_form(a, g2)
    return (a - hodge_star(wedge(g2.phi, a), g2)) * Fraction(1, 3)


def pi14(a: Form, g2: G2Structure) -> Form:
    """``(2a + *(phi ^ a)) / 3``."""
    _two_form(a, g2)
    return (a * 2 + hodge_star(wedge(g2.phi, a), g2)) * Fraction(1, 3)


def metric_identity_residual(i: int, j: int, g2: G2Structure) -> Form:
    """``(e_i -| phi) ^ (e_j -| phi) ^ phi + 6 g_ij vol``."""
    ei = MultiVector.basis(g2.chart, (i,))
    ej = MultiVector.basis(g2.chart, (j,))
    lhs = wedge(wedge(contract(ei, g2.phi), contract(ej, g2.phi)), g2.phi)
    return lhs + g2.vol * (6 * g2.metric[i][j])


@dataclass(frozen=True)
class G2HamiltonianReport:
    is_hamiltonian: bool
    curl: MultiVector
    field: MultiVector
    matched_sign: Optional[int]

    @property
    def curl_is_field(self) -> bool:
        return self.is_hamiltonian and self.curl == self.field

    def __str__(self) -> str:
        ms = "none" if self.matched_sign is None else f"{self.matched_sign:+d}"
        return f"hamiltonian={self.is_hamiltonian}, curl {self.curl}, field {self.field}, matched sign {ms}"


def g2_hamiltonian_check(alpha: Form, g2: G2Structure) -> G2HamiltonianReport:
    """A 1-form is Hamiltonian iff ``pi14(d alpha) = 0``.

    Since ``pi7(d X^flat) = curl(X) -| phi / 3`` the field solving
    ``d alpha + s Y -| phi = 0`` is ``Y = curl(alpha^#) / 3`` with ``s = -1``;
    the report carries both and the sign found by the general verifier.
    """
    _check(alpha, g2)
    if alpha.degree != 1 and alpha.coeffs:
        raise ValueError("g2_hamiltonian_check takes a 1-form")
    ham = not pi14(ext_d(alpha), g2)
    c = curl(sharp(alpha, g2), g2)
    fld = c * Fraction(1, 3)
    matched = None
    if ham:
        matched = hamiltonian_verify(alpha, fld, g2.phi, prefer=-1).sign_matched
        if matched is None:
            raise ArithmeticError("curl failed to produce the Hamiltonian field")
    return G2HamiltonianReport(ham, c, fld, matched)


def g2_pair(alpha: Form, g2: G2Structure) -> HamPair:
    rep = g2_hamiltonian_check(alpha, g2)
    if not rep.is_hamiltonian:
        raise ValueError("form is not Hamiltonian for phi")
    return HamPair(alpha, rep.field, rep.matched_sign)


@dataclass(frozen=True)
class BracketCrossReport:
    bracket: Form
    field_residual: Form
    curl_residual: Form


def g2_bracket_is_cross_check(a: HamPair, b: HamPair, g2: G2Structure) -> BracketCrossReport:
    """Compare ``{a, b}`` with cross products of the Hamiltonian fields and of the curls.

    ``field_residual`` is ``{a,b} - (X_a x X_b)^flat`` with normalised fields;
    ``curl_residual`` is ``{a,b} - (curl(a^#) x curl(b^#))^flat``.
    """
    for p in (a, b):
        _check(p.form, g2)
        if p.form.degree != 1 or p.residual(g2.phi):
            raise ValueError("inputs must be Hamiltonian 1-forms for phi")
    br = poisson(a, b, g2.phi)
    by_field = flat(cross(a.ham_field, b.ham_field, g2), g2)
    ca, cb = (curl(sharp(p.form, g2), g2) for p in (a, b))
    by_curl = flat(cross(ca, cb, g2), g2)
    return BracketCrossReport(br, br - by_field, br - by_curl)


def flat7_to_c3(t, g2_flat: G2Structure, g2_c3: G2Structure):
    """Transport a form or field from Flat7 to RPlusC3 coordinates."""
    cls = type(t)
    out = {}
    for idx, c in t.coeffs.items():
        new = tuple(FLAT_TO_C3[i] for i in idx)
        s = perm_sign(new)
        out[tuple(sorted(new))] = c.rechart(g2_c3.chart, FLAT_TO_C3) * s
    return cls(g2_c3.chart, t.degree, out)


def all_basis_2forms(g2: G2Structure) -> list[Form]:
    return [Form.basis(g2.chart, idx) for idx in index_sets(7, 2)]
