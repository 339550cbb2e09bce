"""n-plectic forms, Hamiltonian pairs, the graded Poisson bracket and the
Lie n-algebra brackets of observables.

Sign convention: a Hamiltonian pair ``(alpha, X)`` with sign ``s`` satisfies
``d alpha + s * X -| omega = 0``.  ``s = +1`` is the normative convention;
brackets always use the normalised field ``s * X``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .brackets import contract_list, schouten
from .exterior import Form, MultiVector, contract, ext_d, index_sets
from .linalg import nullspace, rank, solve
from .symbolic import Poly


def zeta(k: int) -> int:
    """``-(-1)^(k(k+1)/2)``."""
    if k < 1:
        raise ValueError("zeta is defined for k >= 1")
    return 1 if (k * (k + 1) // 2) % 2 else -1


def sgn(n: int) -> int:
    return -1 if n % 2 else 1


class Nondegeneracy(enum.Enum):
    YES = "Yes"
    NO = "No"
    GENERIC_AT_SAMPLE = "GenericAtSample"
    DEGENERATE_AT_SAMPLE = "DegenerateAtSample"


@dataclass(frozen=True)
class NplecticReport:
    closed: bool
    nondegenerate: Nondegeneracy
    sample: Optional[tuple[Fraction, ...]] = None

    @property
    def ok(self) -> bool:
        return self.closed and self.nondegenerate in (Nondegeneracy.YES, Nondegeneracy.GENERIC_AT_SAMPLE)

    def __str__(self) -> str:
        nd = self.nondegenerate.value
        if self.sample is not None:
            nd += "(" + ", ".join(str(x) for x in self.sample) + ")"
        return f"closed={self.closed}, nondegenerate={nd}"


def is_constant_form(t: Form) -> bool:
    return all(p.is_constant() for p in t.coeffs.values())


def _pairing_matrix(omega: Form, k: int, point=None) -> list[list[Fraction]]:
    """Columns: basis k-vectors; rows: basis (deg omega - k)-forms."""
    n = omega.chart.dim
    cols = []
    for j in combinations(range(n), k):
        img = contract(MultiVector.basis(omega.chart, j), omega)
        if point is None:
            cols.append({i: p.constant_term() for i, p in img.coeffs.items()})
        else:
            cols.append({i: p.eval(point) for i, p in img.coeffs.items()})
    rows = index_sets(n, omega.degree - k)
    return [[col.get(r, Fraction(0)) for col in cols] for r in rows]


def check_nplectic(omega: Form, sample: Optional[Sequence] = None) -> NplecticReport:
    """Closedness and injectivity of ``v -> v -| omega`` on vectors."""
    if omega.degree < 2:
        raise ValueError("an n-plectic form has degree at least 2")
    closed = not ext_d(omega)
    n = omega.chart.dim
    if is_constant_form(omega):
        r = rank(_pairing_matrix(omega, 1))
        return NplecticReport(closed, Nondegeneracy.YES if r == n else Nondegeneracy.NO)
    if sample is None:
        sample = [Fraction(i + 2, i + 1) for i in range(n)]
    pt = tuple(Fraction(x) for x in sample)
    r = rank(_pairing_matrix(omega, 1, pt))
    nd = Nondegeneracy.GENERIC_AT_SAMPLE if r == n else Nondegeneracy.DEGENERATE_AT_SAMPLE
    return NplecticReport(closed, nd, pt)


def omega_kernel_basis(omega: Form, k: int) -> list[MultiVector]:
    """Constant k-vector fields annihilated by contraction into ``omega``."""
    if not is_constant_form(omega):
        raise ValueError("kernel computation needs a constant-coefficient form")
    chart = omega.chart
    idxs = list(combinations(range(chart.dim), k))
    if k > omega.degree:
        return [MultiVector.basis(chart, j) for j in idxs]
    m = _pairing_matrix(omega, k)
    vecs = nullspace(m, len(idxs)) if m else nullspace([], len(idxs))
    return [MultiVector(chart, k, {j: v for j, v in zip(idxs, vec) if v}) for vec in vecs]


@dataclass(frozen=True)
class HamPair:
    form: Form
    field: MultiVector
    sign: int = 1

    @property
    def ham_field(self) -> MultiVector:
        """The field in the normative convention ``d alpha = -X -| omega``."""
        return self.field if self.sign > 0 else -self.field

    @property
    def grading(self) -> int:
        return self.field.degree + 1

    def residual(self, omega: Form) -> Form:
        return ext_d(self.form) + self.sign * contract(self.field, omega)


@dataclass(frozen=True)
class HamiltonianReport:
    residual: Form
    sign_matched: Optional[int]
    residuals: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.sign_matched is not None


def hamiltonian_verify(alpha: Form, x: MultiVector, omega: Form, prefer: int = 1) -> HamiltonianReport:
    """Check ``d alpha + s X -| omega = 0`` for ``s`` in {+1, -1}."""
    n = omega.degree - 1
    if alpha.coeffs and x.coeffs and alpha.degree != n - x.degree:
        raise ValueError(f"degree mismatch: form {alpha.degree}, field {x.degree}, omega {omega.degree}")
    da = ext_d(alpha)
    xw = contract(x, omega)
    res = {1: da + xw, -1: da - xw}
    order = (prefer, -prefer)
    matched = next((s for s in order if not res[s]), None)
    shown = res[matched] if matched is not None else res[prefer]
    return HamiltonianReport(shown, matched, res)


@dataclass(frozen=True)
class Solution:
    pair: HamPair
    kernel: list


def hamiltonian_solve(alpha: Form, omega: Form, sign: int = 1, degree: Optional[int] = None) -> Optional[Solution]:
    """Solve ``d alpha + sign * X -| omega = 0`` for X, monomial by monomial.

    Returns None when ``d alpha`` is outside the image of the pairing.
    """
    if not is_constant_form(omega):
        raise ValueError("hamiltonian_solve needs a constant-coefficient omega")
    chart = omega.chart
    n = omega.degree - 1
    k = n - alpha.degree if degree is None else degree
    if k < 0:
        raise ValueError("form degree exceeds n")
    da = ext_d(alpha)
    idxs = list(combinations(range(chart.dim), k))
    rows = index_sets(chart.dim, omega.degree - k)
    m = _pairing_matrix(omega, k)
    kernel = [MultiVector(chart, k, {j: v for j, v in zip(idxs, vec) if v}) for vec in nullspace(m, len(idxs))]
    monos = sorted({e for p in da.coeffs.values() for e in p.terms})
    coeffs: dict = {}
    for e in monos:
        rhs = [-sign * da.coeff(r).terms.get(e, Fraction(0)) for r in rows]
        x = solve(m, rhs)
        if x is None:
            return None
        for j, v in zip(idxs, x):
            if v:
                coeffs[j] = coeffs.get(j, Poly.zero(chart)) + Poly.monomial(chart, e, v)
    field_ = MultiVector(chart, k, coeffs)
    pair = HamPair(alpha, field_, sign)
    if pair.residual(omega):
        raise ArithmeticError("Hamiltonian solve produced a nonzero residual")
    return Solution(pair, kernel)


class PlecticSystem:
    """A chart with an n-plectic form and optional Hamiltonian (n-1)-form."""

    def __init__(
        self,
        omega: Form,
        hamiltonian: Optional[Form] = None,
        x_h: Optional[MultiVector] = None,
        sign: int = 1,
        sample=None,
    ):
        rep = check_nplectic(omega, sample)
        if not rep.closed:
            raise ValueError("omega is not closed")
        if not rep.ok:
            raise ValueError(f"omega is degenerate: {rep}")
        self.chart = omega.chart
        self.omega = omega
        self.n = omega.degree - 1
        self.report = rep
        self.sign = sign
        self.hamiltonian = hamiltonian
        self.x_h = x_h
        if hamiltonian is not None:
            if hamiltonian.coeffs and hamiltonian.degree != self.n - 1:
                raise ValueError(f"Hamiltonian must have degree {self.n - 1}")
            if x_h is None:
                sol = hamiltonian_solve(hamiltonian, omega, sign, degree=1)
                if sol is None:
                    raise ValueError("Hamiltonian form admits no Hamiltonian vector field")
                self.x_h = sol.pair.field
            elif ext_d(hamiltonian) + sign * contract(x_h, omega):
                raise ValueError("X_H does not satisfy dH + s X_H -| omega = 0")

    @property
    def ham_pair(self) -> HamPair:
        if self.hamiltonian is None:
            raise ValueError("system has no Hamiltonian")
        return HamPair(self.hamiltonian, self.x_h, self.sign)

    def pair(self, alpha: Form, sign: int = 1) -> HamPair:
        sol = hamiltonian_solve(alpha, self.omega, sign)
        if sol is None:
            raise ValueError("form is not Hamiltonian")
        return sol.pair


def _check_same(omega: Form, *pairs: HamPair) -> None:
    for p in pairs:
        if p.form.chart != omega.chart or p.field.chart != omega.chart:
            raise ValueError("pair and omega live on different charts")


def poisson(a: HamPair, b: HamPair, omega: Form) -> Form:
    """``{a, b} = (-1)^|b| X_b -| X_a -| omega`` with ``|b| = deg X_b + 1``."""
    _check_same(omega, a, b)
    val = contract(b.ham_field, contract(a.ham_field, omega))
    return val * sgn(b.grading)


def poisson_pair(a: HamPair, b: HamPair, omega: Form) -> HamPair:
    """The bracket together with its Hamiltonian field ``[X_a, X_b]``."""
    return HamPair(poisson(a, b, omega), schouten(a.ham_field, b.ham_field), 1)


def poisson_skew_residual(a: HamPair, b: HamPair, omega: Form) -> Form:
    return poisson(a, b, omega) + sgn(a.grading * b.grading) * poisson(b, a, omega)


def poisson_schouten_residual(a: HamPair, b: HamPair, omega: Form) -> Form:
    """``d{a,b} + [X_a, X_b] -| omega``: the bracket field is Hamiltonian for the bracket."""
    return ext_d(poisson(a, b, omega)) + contract(schouten(a.ham_field, b.ham_field), omega)


def jacobi_residual(a: HamPair, b: HamPair, c: HamPair, omega: Form) -> Form:
    """Graded cyclic sum minus the exact correction term."""
    _check_same(omega, a, b, c)
    ga, gb, gc = a.grading, b.grading, c.grading
    lhs = (
        sgn(ga * gc) * poisson(a, poisson_pair(b, c, omega), omega)
        + sgn(gb * ga) * poisson(b, poisson_pair(c, a, omega), omega)
        + sgn(gc * gb) * poisson(c, poisson_pair(a, b, omega), omega)
    )
    corr = ext_d(contract_list([c.ham_field, b.ham_field, a.ham_field], omega))
    return lhs - sgn(gb * gc + gb * ga + gb) * corr


def lie_n_bracket(pairs: Sequence[HamPair], omega: Form) -> Form:
    """``l_k = zeta(k) X_k -| ... -| X_1 -| omega`` on Hamiltonian (n-1)-forms."""
    n = omega.degree - 1
    for p in pairs:
        if p.form.coeffs and p.form.degree != n - 1:
            raise ValueError(f"l_k takes Hamiltonian {n - 1}-forms")
    k = len(pairs)
    if k < 2:
        raise ValueError("l_k needs at least two arguments")
    return contract_list([p.ham_field for p in pairs], omega) * zeta(k)


def rogers_residual(pairs: Sequence[HamPair], omega: Form) -> Form:
    """``d(X_m -| ... -| X_1 -| w) - (-1)^m sum_{i<j} (-1)^(i+j) (...) -| [X_i,X_j] -| w``."""
    m = len(pairs)
    if m < 2:
        raise ValueError("the lemma needs at least two fields")
    xs = [p.ham_field for p in pairs]
    for x in xs:
        if x.degree != 1:
            raise ValueError("fields must be vector fields")
    lhs = ext_d(contract_list(xs, omega))
    rhs = Form.zero(omega.chart, omega.degree - m + 1)
    for i in range(m):
        for j in range(i + 1, m):
            br = schouten(xs[i], xs[j])
            rest = [x for t, x in enumerate(xs) if t not in (i, j)]
            rhs = rhs + contract_list([br] + rest, omega) * sgn(i + j)
    return lhs - rhs * sgn(m)
