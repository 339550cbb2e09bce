"""Multisymplectic phase space: the k-th exterior power of the cotangent bundle
of a base chart, with its tautological form, complete lifts, and momentum and
position forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

from .brackets import list_boundary, schouten
from .exterior import (
    Decomposable,
    Form,
    MultiVector,
    contract,
    ext_d,
    index_sets,
    lie_derivative,
    perm_sign,
    wedge,
    wedge_all,
)
from .linalg import solve
from .plectic import HamPair, NplecticReport, check_nplectic, hamiltonian_solve, omega_kernel_basis, poisson, zeta
from .symbolic import Chart, Poly


def _fiber_name(idx: Sequence[int], wide: bool) -> str:
    sep = "_" if wide else ""
    return "p" + sep.join(str(i + 1) for i in idx)


@dataclass(frozen=True)
class PhaseSpace:
    base: Chart
    k: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.base.dim:
            raise ValueError(f"k must lie in 1..{self.base.dim}")

    @cached_property
    def fibers(self) -> list[tuple[int, ...]]:
        return index_sets(self.base.dim, self.k)

    @cached_property
    def chart(self) -> Chart:
        wide = self.base.dim >= 10
        names = list(self.base.names) + [_fiber_name(i, wide) for i in self.fibers]
        if len(set(names)) != len(names):
            raise ValueError("fiber coordinate names clash with base names")
        return Chart(tuple(names))

    @cached_property
    def _fiber_pos(self) -> dict[tuple[int, ...], int]:
        m = self.base.dim
        return {idx: m + r for r, idx in enumerate(self.fibers)}

    def fiber_var(self, idx: Sequence[int]) -> tuple[int, Optional[int]]:
        """Sign and chart position of ``p_idx`` for an unsorted multi-index."""
        s = perm_sign(tuple(idx))
        if not s:
            return 0, None
        return s, self._fiber_pos[tuple(sorted(idx))]

    @cached_property
    def theta(self) -> Form:
        c = self.chart
        out = Form.zero(c, self.k)
        for idx, pos in self._fiber_pos.items():
            out = out + Form.basis(c, idx, Poly.var(c, c.names[pos]))
        return out

    @cached_property
    def omega(self) -> Form:
        return -ext_d(self.theta)

    def check(self) -> NplecticReport:
        return check_nplectic(self.omega)

    def pull(self, p: Poly) -> Poly:
        """Reinterpret a base polynomial on the total chart."""
        return p.rechart(self.chart, list(range(self.base.dim)))

    def pull_graded(self, t):
        cls = type(t)
        return cls(self.chart, t.degree, {i: self.pull(c) for i, c in t.coeffs.items()})

    def push(self, x: MultiVector) -> MultiVector:
        """Pushforward: keep the components along base directions only."""
        m = self.base.dim
        out = {}
        for idx, c in x.coeffs.items():
            if all(i < m for i in idx):
                if any(e[m:] and any(e[m:]) for e in c.terms):
                    raise ValueError("pushforward of a field depending on fiber coordinates")
                out[idx] = Poly(self.base, {e[:m]: v for e, v in c.terms.items()})
        return MultiVector(self.base, x.degree, out)


def build_phase_space(base: Chart, k: int) -> PhaseSpace:
    ps = PhaseSpace(base, k)
    rep = ps.check()
    if not rep.ok:
        raise ArithmeticError(f"canonical form failed the nondegeneracy check: {rep}")
    return ps


def complete_lift(y: MultiVector, ps: PhaseSpace) -> MultiVector:
    """Vector field on the phase space covering ``y`` and preserving theta."""
    if y.chart != ps.base or (y.degree != 1 and y.coeffs):
        raise ValueError("complete_lift takes a vector field on the base chart")
    c = ps.chart
    m = ps.base.dim
    ys = [ps.pull(y.coeff((i,))) for i in range(m)]
    out = {(i,): ys[i] for i in range(m) if ys[i]}
    dys = [[ys[i].partial(j) for j in range(m)] for i in range(m)]
    for jj, pos in ps._fiber_pos.items():
        acc = Poly.zero(c)
        for r, jr in enumerate(jj):
            for i in range(m):
                d = dys[i][jr]
                if not d:
                    continue
                s, ppos = ps.fiber_var(jj[:r] + (i,) + jj[r + 1 :])
                if s:
                    acc = acc - d * Poly.var(c, c.names[ppos]) * s
        if acc:
            out[(pos,)] = acc
    lift = MultiVector(c, 1, out)
    if lie_derivative(lift, ps.theta) or ps.push(lift) != y:
        raise ArithmeticError("complete lift failed its defining checks")
    return lift


def lift_list(ys: Union[Decomposable, Sequence[MultiVector]], ps: PhaseSpace) -> MultiVector:
    """``Y_1^# ^ ... ^ Y_l^#``."""
    ys = list(ys)
    if not ys:
        return MultiVector.basis(ps.chart, ())
    return wedge_all([complete_lift(v, ps) for v in ys], ps.chart, MultiVector)


def momentum_form(ys: Union[Decomposable, Sequence[MultiVector]], ps: PhaseSpace) -> Form:
    """``P(Y) = -zeta(l+1) Y^# -| theta``."""
    ys = list(ys)
    l = len(ys)
    if l > ps.k:
        raise ValueError(f"degree {l} exceeds k = {ps.k}")
    return contract(lift_list(ys, ps), ps.theta) * -zeta(l + 1)


def momentum_pair(ys: Union[Decomposable, Sequence[MultiVector]], ps: PhaseSpace) -> HamPair:
    """``P(Y)`` with Hamiltonian field ``zeta(l) Y^#``; valid when Y is in the Lie kernel."""
    ys = list(ys)
    return HamPair(momentum_form(ys, ps), lift_list(ys, ps) * zeta(len(ys)), 1)


def in_kernel(ys: Union[Decomposable, Sequence[MultiVector]]) -> bool:
    ys = list(ys)
    if len(ys) < 2:
        return True
    return not list_boundary(Decomposable(ys))


def momentum_residual(ys: Union[Decomposable, Sequence[MultiVector]], ps: PhaseSpace) -> Form:
    """``d P(Y) + zeta(l) Y^# -| omega``; zero for Y in the Lie kernel."""
    ys = list(ys)
    return ext_d(momentum_form(ys, ps)) + contract(lift_list(ys, ps), ps.omega) * zeta(len(ys))


def position_form(alpha: Form, ps: PhaseSpace) -> Form:
    if alpha.chart != ps.base:
        raise ValueError("position_form takes a form on the base chart")
    if alpha.degree > ps.k:
        raise ValueError(f"degree {alpha.degree} exceeds k = {ps.k}")
    return ps.pull_graded(alpha)


def _vertical_correction(x: MultiVector, ps: PhaseSpace) -> Optional[MultiVector]:
    """Subtract a kernel element so the base components vanish, if possible."""
    m = ps.base.dim
    base_part = {i: c for i, c in x.coeffs.items() if all(j < m for j in i)}
    if not base_part:
        return x
    kernel = omega_kernel_basis(ps.omega, x.degree)
    keys = sorted({i for kv in kernel for i in kv.coeffs if all(j < m for j in i)} | set(base_part))
    rows = [[kv.coeff(i).terms.get((0,) * ps.chart.dim, 0) for kv in kernel] for i in keys]
    monos = sorted({e for c in base_part.values() for e in c.terms})
    out = x
    for e in monos:
        rhs = [-base_part[i].terms.get(e, 0) if i in base_part else 0 for i in keys]
        sol = solve(rows, rhs) if kernel else None
        if sol is None:
            return None
        mono = Poly.monomial(ps.chart, e, 1)
        for coef, kv in zip(sol, kernel):
            if coef:
                out = out + kv * (mono * coef)
    return out


def position_pair(alpha: Form, ps: PhaseSpace) -> HamPair:
    """``pi^* alpha`` with a Hamiltonian field whose pushforward vanishes."""
    form = position_form(alpha, ps)
    degree = ps.k - form.degree
    if degree < 1:
        raise ValueError("position forms of degree k have no Hamiltonian field")
    sol = hamiltonian_solve(form, ps.omega, 1, degree=degree)
    if sol is None:
        raise ArithmeticError("position form is not Hamiltonian")
    fld = _vertical_correction(sol.pair.field, ps)
    if fld is None:
        raise ArithmeticError("no Hamiltonian field with vanishing pushforward")
    return HamPair(form, fld, 1)


def push_zero_check(alpha: Form, ps: PhaseSpace) -> bool:
    pair = position_pair(alpha, ps)
    return not pair.residual(ps.omega) and not ps.push(pair.field)


@dataclass(frozen=True)
class BracketResiduals:
    momentum: Form
    position: Form
    mixed: Form

    @property
    def ok(self) -> bool:
        return not self.momentum and not self.position and not self.mixed


def momentum_bracket_residuals(
    y1: Sequence[MultiVector],
    y2: Sequence[MultiVector],
    alpha: Form,
    ps: PhaseSpace,
    beta: Optional[Form] = None,
) -> BracketResiduals:
    """Residuals of the three bracket relations between momentum and position forms.

    * ``{P(Y1),P(Y2)} + (-1)^(ts+s+t) P([Y1,Y2]) + zeta(s+1)zeta(t+1) d((Y1# ^ Y2#) -| theta)``
      with ``P([Y1,Y2]) = -zeta(s+t) [Y1#,Y2#] -| theta``;
    * ``{pi^* alpha, pi^* beta}`` (beta defaults to alpha);
    * ``{pi^* alpha, P(Y2)} + zeta(t+1) pi^*(Y2 -| d alpha)``; the factor
      ``zeta(t+1) = (-1)^(t+1) zeta(t)`` differs from ``zeta(t)`` when ``t`` is even.
    """
    y1, y2 = list(y1), list(y2)
    for ys in (y1, y2):
        if not in_kernel(ys):
            raise ValueError("momentum relations need Y in the Lie kernel")
    s, t = len(y1), len(y2)
    om, th = ps.omega, ps.theta
    a1, a2 = momentum_pair(y1, ps), momentum_pair(y2, ps)
    l1, l2 = lift_list(y1, ps), lift_list(y2, ps)

    br = schouten(l1, l2)
    p_br = contract(br, th) * -zeta(s + t)
    sign = -1 if (t * s + s + t) % 2 else 1
    r1 = poisson(a1, a2, om) + p_br * sign + ext_d(contract(wedge(l1, l2), th)) * (zeta(s + 1) * zeta(t + 1))

    pa = position_pair(alpha, ps)
    pb = position_pair(beta if beta is not None else alpha, ps)
    r2 = poisson(pa, pb, om)

    base_y2 = wedge_all(y2, ps.base, MultiVector)
    r3 = poisson(pa, a2, om) + ps.pull_graded(contract(base_y2, ext_d(alpha))) * zeta(t + 1)
    return BracketResiduals(r1, r2, r3)
