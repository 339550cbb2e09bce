"""Schouten bracket of multivector fields and the graded Cartan calculus.

Each ``*_residual`` function returns ``lhs - rhs`` of an identity; a zero
form or multivector field means the identity holds for those inputs.
"""

from __future__ import annotations

from typing import Sequence

from .exterior import (
    Decomposable,
    Form,
    MultiVector,
    contract,
    ext_d,
    lie_derivative,
    perm_sign,
    wedge,
)
from .symbolic import Poly


def _sgn(n: int) -> int:
    return -1 if n % 2 else 1


def vf_bracket(x: MultiVector, y: MultiVector) -> MultiVector:
    """Lie bracket of vector fields, ``[X,Y]^j = X(Y^j) - Y(X^j)``."""
    if x.degree != 1 or y.degree != 1:
        raise ValueError("vf_bracket takes two vector fields")
    chart = x.chart
    n = chart.dim
    xs = [x.coeff((i,)) for i in range(n)]
    ys = [y.coeff((i,)) for i in range(n)]
    out = {}
    for j in range(n):
        v = Poly.zero(chart)
        for i in range(n):
            if xs[i] and ys[j]:
                v = v + xs[i] * ys[j].partial(i)
            if ys[i] and xs[j]:
                v = v - ys[i] * xs[j].partial(i)
        if v:
            out[(j,)] = v
    return MultiVector._raw(chart, 1, out)


def _accumulate(out: dict, idx: tuple, sign: int, p: Poly) -> None:
    s = perm_sign(idx)
    if not s or not p:
        return
    key = tuple(sorted(idx))
    if s * sign < 0:
        p = -p
    v = out[key] + p if key in out else p
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def schouten(x: MultiVector, y: MultiVector) -> MultiVector:
    """Schouten bracket of multivector fields of degrees k, l >= 1.

    Uses the decomposable formula
    ``[X,Y] = sum (-1)^(i+j) [X_i,Y_j] ^ X_1..^X_i..X_k ^ Y_1..^Y_j..Y_l``
    with each basis term ``f d/dI`` split as ``(f d/dI_1) ^ d/dI_2 ^ ...``.
    """
    if x.degree < 1 or y.degree < 1:
        raise ValueError("schouten needs degrees at least one")
    if x.chart != y.chart:
        raise ValueError("operands live on different charts")
    chart = x.chart
    n = chart.dim
    k, l = x.degree, y.degree
    out: dict = {}
    for ii, f in x.coeffs.items():
        df = [f.partial(m) for m in range(n)]
        for jj, g in y.coeffs.items():
            dg = [g.partial(m) for m in range(n)]
            # pairs (a, b) with a, b 1-based factor positions
            for a in range(1, k + 1):
                xrest = ii[: a - 1] + ii[a:]
                for b in range(1, l + 1):
                    yrest = jj[: b - 1] + jj[b:]
                    sign = _sgn(a + b)
                    ia, jb = ii[a - 1], jj[b - 1]
                    if a == 1 and b == 1:
                        # [f d_ia, g d_jb] = f dg/dia d_jb - g df/djb d_ia
                        _accumulate(out, (jb,) + xrest + yrest, sign, f * dg[ia])
                        _accumulate(out, (ia,) + xrest + yrest, -sign, g * df[jb])
                    elif a == 1:
                        # [f d_ia, d_jb] = -df/djb d_ia ; Y_1 carries g
                        _accumulate(out, (ia,) + xrest + yrest, -sign, df[jb] * g)
                    elif b == 1:
                        # [d_ia, g d_jb] = dg/dia d_jb ; X_1 carries f
                        _accumulate(out, (jb,) + xrest + yrest, sign, dg[ia] * f)
    return MultiVector._raw(chart, k + l - 1, out)


def lie_bracket_or_schouten(x: MultiVector, y: MultiVector) -> MultiVector:
    if x.degree == 1 and y.degree == 1:
        return vf_bracket(x, y)
    return schouten(x, y)


# ---- residuals of the graded Cartan calculus -------------------------------


def dl_residual(x: MultiVector, t: Form) -> Form:
    """``d L_X t - (-1)^(k+1) L_X dt``."""
    k = x.degree
    return ext_d(lie_derivative(x, t)) - _sgn(k + 1) * lie_derivative(x, ext_d(t))


def bracket_hook_residual(x: MultiVector, y: MultiVector, t: Form) -> Form:
    """``[X,Y] -| t - ((-1)^((k+1)l) L_X(Y -| t) - Y -| L_X t)``."""
    k, l = x.degree, y.degree
    lhs = contract(schouten(x, y), t)
    rhs = _sgn((k + 1) * l) * lie_derivative(x, contract(y, t)) - contract(y, lie_derivative(x, t))
    return lhs - rhs


def lie_bracket_residual(x: MultiVector, y: MultiVector, t: Form) -> Form:
    """``L_[X,Y] t - ((-1)^((k+1)(l+1)) L_X L_Y t - L_Y L_X t)``."""
    k, l = x.degree, y.degree
    lhs = lie_derivative(schouten(x, y), t)
    rhs = _sgn((k + 1) * (l + 1)) * lie_derivative(x, lie_derivative(y, t)) - lie_derivative(
        y, lie_derivative(x, t)
    )
    return lhs - rhs


def lie_wedge_residual(x: MultiVector, y: MultiVector, t: Form) -> Form:
    """``L_(X^Y) t - ((-1)^l Y -| L_X t + L_Y(X -| t))``."""
    l = y.degree
    lhs = lie_derivative(wedge(x, y), t)
    rhs = _sgn(l) * contract(y, lie_derivative(x, t)) + lie_derivative(y, contract(x, t))
    return lhs - rhs


def interior_bracket_residual(x: MultiVector, y: MultiVector, t: Form) -> Form:
    """Residual of the interior equation expressing ``[X,Y] -| t`` via d and contractions."""
    k, l = x.degree, y.degree
    lhs = contract(schouten(x, y), t)
    rhs = (
        -contract(y, ext_d(contract(x, t)))
        + _sgn(l) * ext_d(contract(y, contract(x, t)))
        + _sgn(k * l + k) * contract(x, contract(y, ext_d(t)))
        - _sgn(k * l + k + l) * contract(x, ext_d(contract(y, t)))
    )
    return lhs - rhs


def schouten_antisymmetry_residual(x: MultiVector, y: MultiVector) -> MultiVector:
    """``[X,Y] + (-1)^((k-1)(l-1)) [Y,X]``."""
    k, l = x.degree, y.degree
    return schouten(x, y) + _sgn((k - 1) * (l - 1)) * schouten(y, x)


def schouten_leibniz_residual(x: MultiVector, y: MultiVector, z: MultiVector) -> MultiVector:
    """``[X, Y^Z] - ([X,Y]^Z + (-1)^((k-1)l) Y^[X,Z])``."""
    k, l = x.degree, y.degree
    lhs = schouten(x, wedge(y, z))
    rhs = wedge(schouten(x, y), z) + _sgn((k - 1) * l) * wedge(y, schouten(x, z))
    return lhs - rhs


def schouten_jacobi_residual(x: MultiVector, y: MultiVector, z: MultiVector) -> MultiVector:
    """Graded cyclic sum ``sum (-1)^((k-1)(m-1)) [X,[Y,Z]]``."""
    k, l, m = x.degree, y.degree, z.degree
    return (
        _sgn((k - 1) * (m - 1)) * schouten(x, schouten(y, z))
        + _sgn((l - 1) * (k - 1)) * schouten(y, schouten(z, x))
        + _sgn((m - 1) * (l - 1)) * schouten(z, schouten(x, y))
    )


def list_boundary(fields: Decomposable) -> MultiVector:
    """``sum_{i<j} (-1)^(i+j) [Y_i,Y_j] ^ Y_1..^Y_i..^Y_j..Y_l`` for a list of vector fields."""
    l = fields.degree
    out = MultiVector.zero(fields.chart, max(l - 1, 0))
    for i in range(l):
        for j in range(i + 1, l):
            br = vf_bracket(fields[i], fields[j])
            rest = fields.omit(i, j)
            term = wedge(br, rest.to_mvf()) if rest.degree else br
            out = out + _sgn(i + j) * term
    return out


def cartan_residual(p: Decomposable, dp: MultiVector, t: Form) -> Form:
    """Residual of the extended Cartan formula for a list of vector fields.

    ``(-1)^k d(V_p -| t) = V_dp -| t + sum_i (-1)^i (V_1..^V_i..V_k) -| L_(V_i) t + V_p -| dt``
    where ``dp`` is the multivector standing in for ``V_dp`` (1-based ``i``).
    """
    k = p.degree
    vp = p.to_mvf()
    lhs = _sgn(k) * ext_d(contract(vp, t))
    rhs = contract(vp, ext_d(t))
    if k >= 2:
        rhs = rhs + contract(dp, t)
    for i in range(k):
        rest = p.omit(i)
        inner = lie_derivative(p[i], t)
        term = rest.contract(inner)
        rhs = rhs + _sgn(i + 1) * term
    return lhs - rhs


def contract_list(fields: Sequence[MultiVector], t: Form) -> Form:
    """Insert the fields in order: ``fields[-1] -| ... -| fields[0] -| t``."""
    for f in fields:
        t = contract(f, t)
    return t
