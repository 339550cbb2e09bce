"""Conserved quantities, continuous symmetries, the Noether correspondence and
weak/full homotopy moment maps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .brackets import schouten
from .exterior import Exactness, Form, MultiVector, classify_closed_exact, contract, ext_d, lie_derivative
from .lie import ActionModel, GMulti, ce_boundary, express_in, generator_mvf, lie_kernel_basis, schouten_g
from .plectic import HamPair, PlecticSystem, poisson, sgn, zeta


class Level(enum.IntEnum):
    """Ordered so that a larger value is a stronger statement."""

    NONE = 0
    LOCAL = 1
    GLOBAL = 2
    STRICT = 3

    def __str__(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class ClassificationReport:
    subject: str
    level: Level
    value: Form
    witness: Optional[Form] = None

    def at_least(self, level: Level) -> bool:
        return self.level >= level

    def __str__(self) -> str:
        s = f"{self.subject}: {self.level} (value {self.value})"
        if self.witness is not None:
            s += f", primitive {self.witness}"
        return s


def classify_form(t: Form, subject: str = "") -> ClassificationReport:
    """Strict if zero, Global if exact, Local if closed, else None."""
    rep = classify_closed_exact(t)
    if rep.kind is Exactness.ZERO:
        return ClassificationReport(subject, Level.STRICT, t)
    if rep.kind is Exactness.CLOSED_EXACT:
        return ClassificationReport(subject, Level.GLOBAL, t, rep.primitive)
    if rep.kind is Exactness.CLOSED_DEG0_CONSTANT:
        return ClassificationReport(subject, Level.LOCAL, t)
    return ClassificationReport(subject, Level.NONE, t)


def _need_h(system: PlecticSystem) -> None:
    if system.hamiltonian is None:
        raise ValueError("system has no Hamiltonian")


def x_h(system: PlecticSystem) -> MultiVector:
    """X_H in the normative sign convention."""
    _need_h(system)
    return system.ham_pair.ham_field


def classify_conserved(alpha: HamPair, system: PlecticSystem, subject: str = "alpha") -> ClassificationReport:
    """Classify ``L_{X_H} alpha``."""
    _need_h(system)
    return classify_form(lie_derivative(x_h(system), alpha.form), subject)


def preserves_omega(x: MultiVector, omega: Form) -> bool:
    return not lie_derivative(x, omega)


def classify_symmetry(x: MultiVector, system: PlecticSystem, subject: str = "X") -> ClassificationReport:
    """Classify ``L_X H`` for a field preserving omega."""
    _need_h(system)
    if not preserves_omega(x, system.omega):
        raise ValueError(f"{subject} does not preserve omega")
    return classify_form(lie_derivative(x, system.hamiltonian), subject)


@dataclass(frozen=True)
class NoetherResiduals:
    res1: Form
    res2: Form

    @property
    def ok(self) -> bool:
        return not self.res1 and not self.res2


def noether_residual(alpha: HamPair, system: PlecticSystem) -> NoetherResiduals:
    """Residuals of the two Noether identities relating ``L_{X_a} H`` and ``L_{X_H} a``.

    With the stored fields and signs ``s_a``, ``s_H`` the identity reads
    ``L_{X_a}H - d(X_a -| H) = -s_a s_H (L_{X_H}a - d(X_H -| a))``; for
    ``s_a = -s_H`` this is the familiar form with both sides equal.
    """
    _need_h(system)
    h = system.ham_pair
    xa, xh = alpha.field, h.field
    a_side = lie_derivative(xa, h.form) - ext_d(contract(xa, h.form))
    h_side = lie_derivative(xh, alpha.form) - ext_d(contract(xh, alpha.form))
    s = alpha.sign * h.sign
    return NoetherResiduals(a_side + h_side * s, h_side + a_side * s)


def conserved_interior_residual(alpha: HamPair, system: PlecticSystem) -> Form:
    """``d L_{X_H} a - [X_a, X_H] -| omega`` with normalised fields."""
    _need_h(system)
    xa, xh = alpha.ham_field, x_h(system)
    return ext_d(lie_derivative(xh, alpha.form)) - contract(schouten(xa, xh), system.omega)


# ---- moment maps ---------------------------------------------------------------


class Kind(enum.Enum):
    WEAK = "Weak"
    FULL = "Full"


@dataclass(frozen=True)
class Component:
    p: GMulti
    form: Form
    sign: int = 1


@dataclass
class MomentMapData:
    system: PlecticSystem
    action: ActionModel
    components: dict[int, list[Component]]
    kind: Kind = Kind.WEAK

    def __post_init__(self) -> None:
        n = self.system.n
        g = self.action.algebra
        if self.action.chart != self.system.chart:
            raise ValueError("action and system use different charts")
        for k, comps in self.components.items():
            for c in comps:
                if c.p.algebra != g or c.p.degree != k:
                    raise ValueError(f"component {c.p} is not in degree {k}")
                if c.form.coeffs and c.form.degree != n - k:
                    raise ValueError(f"f_{k}({c.p}) must have degree {n - k}")
                if c.sign not in (1, -1):
                    raise ValueError("signs must be +1 or -1")
            if self.kind is Kind.WEAK:
                for c in comps:
                    if not ce_boundary(c.p).is_zero():
                        raise ValueError(f"{c.p} is not in the Lie kernel")
            else:
                if express_in_all(g.basis(k), comps) is None:
                    raise ValueError(f"full map needs components spanning degree {k}")

    def coefficients(self, k: int, p: GMulti) -> Optional[list[Fraction]]:
        comps = self.components.get(k, [])
        return express_in(p, [c.p for c in comps])

    def evaluate(self, p: GMulti) -> Form:
        """``f_k(p)`` by linear extension; zero outside the stored degrees."""
        k = p.degree
        zero = Form.zero(self.system.chart, max(self.system.n - k, 0))
        if p.is_zero() or k not in self.components:
            return zero
        coeffs = self.coefficients(k, p)
        if coeffs is None:
            raise ValueError(f"{p} is outside the span of the stored basis")
        out = zero
        for c, comp in zip(coeffs, self.components[k]):
            if c:
                out = out + comp.form * c
        return out

    def ham_pair(self, p: GMulti) -> HamPair:
        """``f_k(p)`` with its normalised Hamiltonian field ``s zeta(k) V_p``."""
        k = p.degree
        coeffs = self.coefficients(k, p)
        if coeffs is None:
            raise ValueError(f"{p} is outside the span of the stored basis")
        fld = MultiVector.zero(self.system.chart, k)
        for c, comp in zip(coeffs, self.components[k]):
            if c:
                fld = fld + generator_mvf(self.action, comp.p) * (c * comp.sign * zeta(k))
        return HamPair(self.evaluate(p), fld, 1)


def express_in_all(targets: Sequence[GMulti], comps: Sequence[Component]):
    for t in targets:
        if express_in(t, [c.p for c in comps]) is None:
            return None
    return True


@dataclass(frozen=True)
class MomentCheck:
    k: int
    p: GMulti
    residual: Form
    matched_sign: Optional[int]
    recorded_sign: int

    @property
    def ok(self) -> bool:
        return self.matched_sign == self.recorded_sign

    def __str__(self) -> str:
        ms = "none" if self.matched_sign is None else f"{self.matched_sign:+d}"
        return f"f_{self.k}({self.p}): residual {self.residual}, matched sign {ms}, recorded {self.recorded_sign:+d}"


def _sign_report(base: Form, term: Form, k: int, p: GMulti, recorded: int) -> MomentCheck:
    res = {s: base + term * s for s in (1, -1)}
    matched = next((s for s in (recorded, -recorded) if not res[s]), None)
    return MomentCheck(k, p, res[recorded], matched, recorded)


def weak_moment_verify(m: MomentMapData) -> list[MomentCheck]:
    """``d f_k(p) + s zeta(k) V_p -| omega`` for every stored kernel element."""
    out = []
    for k in sorted(m.components):
        for c in m.components[k]:
            if not ce_boundary(c.p).is_zero():
                raise ValueError(f"{c.p} is not in the Lie kernel")
            term = contract(generator_mvf(m.action, c.p), m.system.omega) * zeta(k)
            out.append(_sign_report(ext_d(c.form), term, k, c.p, c.sign))
    return out


def full_moment_verify(m: MomentMapData) -> list[MomentCheck]:
    """``f_{k-1}(dp) + d f_k(p) + s zeta(k) V_p -| omega`` on every stored element."""
    out = []
    for k in sorted(m.components):
        if k > 1 and (k - 1) not in m.components:
            raise ValueError(f"full map is missing degree {k - 1}")
        for c in m.components[k]:
            lower = m.evaluate(ce_boundary(c.p)) if k > 1 else Form.zero(m.system.chart, m.system.n - k)
            base = lower + ext_d(c.form)
            term = contract(generator_mvf(m.action, c.p), m.system.omega) * zeta(k)
            out.append(_sign_report(base, term, k, c.p, c.sign))
    return out


@dataclass(frozen=True)
class Candidate:
    p: GMulti
    form: Form
    check: MomentCheck


def moment_candidate_from_boundary(q: GMulti, system: PlecticSystem, action: ActionModel) -> Candidate:
    """For ``p = dq`` propose ``(-1)^k V_q -| omega`` as ``f_k(p)``.

    Since ``d(V_q -| omega) = (-1)^(k+1) V_p -| omega`` for an invariant closed
    omega, the candidate satisfies the weak equation with sign ``-zeta(k)``.
    """
    if q.algebra != action.algebra or action.chart != system.chart:
        raise ValueError("action and system do not match")
    if q.degree < 2:
        raise ValueError("q must have degree at least two")
    p = ce_boundary(q)
    k = p.degree
    form = contract(generator_mvf(action, q), system.omega) * sgn(k)
    term = contract(generator_mvf(action, p), system.omega) * zeta(k)
    check = _sign_report(ext_d(form), term, k, p, -zeta(k))
    if not check.ok:
        raise ArithmeticError("boundary candidate failed the weak moment equation")
    return Candidate(p, form, check)


@dataclass(frozen=True)
class SigmaValue:
    k: int
    xi: GMulti
    p: GMulti
    value: Form
    closed: bool


def sigma_equivariance(m: MomentMapData) -> list[SigmaValue]:
    """``Sigma_k(xi, p) = f_k([xi, p]) + L_{V_xi} f_k(p)`` on basis pairs."""
    g = m.action.algebra
    out = []
    for k in sorted(m.components):
        for xi in g.basis(1):
            vxi = generator_mvf(m.action, xi)
            for c in m.components[k]:
                br = schouten_g(xi, c.p)
                val = m.evaluate(br) + lie_derivative(vxi, c.form)
                out.append(SigmaValue(k, xi, c.p, val, not ext_d(val)))
    return out


def is_equivariant(m: MomentMapData) -> bool:
    return all(not s.value for s in sigma_equivariance(m))


def adjust_by_cochain(m: MomentMapData, shift: Mapping[int, Sequence[Form]]) -> MomentMapData:
    """Add closed forms ``shift[k][i]`` to the i-th stored component in degree k."""
    comps = {}
    for k, lst in m.components.items():
        extra = list(shift.get(k, []))
        if extra and len(extra) != len(lst):
            raise ValueError(f"shift in degree {k} must match the stored basis")
        new = []
        for i, c in enumerate(lst):
            if extra:
                if ext_d(extra[i]):
                    raise ValueError(f"shift for {c.p} is not closed")
                new.append(replace(c, form=c.form + extra[i]))
            else:
                new.append(c)
        comps[k] = new
    return MomentMapData(m.system, m.action, comps, m.kind)


def morphism_closed_check(m: MomentMapData, p: GMulti, q: GMulti) -> ClassificationReport:
    """Classify ``{f_k(p), f_l(q)} - (-1)^(k+l+kl) f_{k+l-1}([p,q])``."""
    k, l = p.degree, q.degree
    for deg in (k, l):
        if deg not in m.components:
            raise ValueError(f"moment map has no degree {deg} component")
    a, b = m.ham_pair(p), m.ham_pair(q)
    br = poisson(a, b, m.system.omega)
    pq = schouten_g(p, q)
    if not pq.is_zero() and (k + l - 1) not in m.components:
        raise ValueError(f"moment map has no degree {k + l - 1} component")
    diff = br - m.evaluate(pq) * sgn(k + l + k * l)
    return classify_form(diff, f"{{f_{k}({p}), f_{l}({q})}}")


@dataclass
class PreservationReport:
    generators: list[ClassificationReport]
    conserved: list[ClassificationReport] = field(default_factory=list)
    symmetries: list[ClassificationReport] = field(default_factory=list)

    @property
    def level(self) -> Level:
        return min((r.level for r in self.generators), default=Level.STRICT)

    @property
    def summary(self) -> str:
        lvl = self.level
        if lvl is Level.NONE:
            return "does not preserve H"
        return {Level.LOCAL: "locally", Level.GLOBAL: "globally", Level.STRICT: "strictly"}[lvl] + " preserves H"

    @property
    def implications_hold(self) -> bool:
        lvl = self.level
        if lvl is Level.NONE:
            return True
        need = Level.GLOBAL if lvl is Level.STRICT else Level.LOCAL
        return all(r.level >= need for r in self.conserved + self.symmetries)


def action_preserves_h(m: MomentMapData) -> PreservationReport:
    """Classify ``L_{V_xi} H`` and the induced conserved quantities and symmetries."""
    system = m.system
    _need_h(system)
    g = m.action.algebra
    gens = [
        classify_form(lie_derivative(generator_mvf(m.action, xi), system.hamiltonian), f"L_V({xi}) H")
        for xi in g.basis(1)
    ]
    rep = PreservationReport(gens)
    for k in sorted(m.components):
        for c in m.components[k]:
            pair = m.ham_pair(c.p)
            rep.conserved.append(classify_conserved(pair, system, f"f_{k}({c.p})"))
            rep.symmetries.append(classify_symmetry(generator_mvf(m.action, c.p), system, f"V({c.p})"))
    return rep


def kernel_components(m: MomentMapData, k: int) -> list[GMulti]:
    return lie_kernel_basis(m.action.algebra, k)
