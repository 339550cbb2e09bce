"""Verification workflows behind the command line: generic scene checks and
the example-specific suites of the built-in scenes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .brackets import schouten
from .exterior import Form, classify_closed_exact, contract, ext_d, lie_derivative
from .g2 import (
    FLAT7,
    cross,
    flat,
    flat7_to_c3,
    g2_bracket_is_cross_check,
    g2_hamiltonian_check,
    g2_pair,
    hodge_star,
    metric_identity_residual,
    pi14,
    standard_g2,
)
from .noether import (
    Kind,
    Level,
    action_preserves_h,
    classify_conserved,
    classify_symmetry,
    conserved_interior_residual,
    full_moment_verify,
    is_equivariant,
    morphism_closed_check,
    noether_residual,
    sigma_equivariance,
    weak_moment_verify,
)
from .lie import parse_gmulti
from .parsing import parse_form, parse_mvf
from .phase import (
    complete_lift,
    momentum_bracket_residuals,
    momentum_residual,
    position_form,
    push_zero_check,
)
from .plectic import HamPair, hamiltonian_solve, hamiltonian_verify, poisson, poisson_schouten_residual
from .report import Report
from .scenes import BUILTIN_NAMES, Scene, SceneError, builtin_scene


def _solve_pair(alpha: Form, scene: Scene, sign: int = 1) -> HamPair:
    sol = hamiltonian_solve(alpha, scene.system.omega, sign)
    if sol is None:
        raise SceneError("form is not Hamiltonian for omega")
    return sol.pair


def _need_system(scene: Scene) -> None:
    if scene.system is None:
        raise SceneError("scene has no system section")


def check_scene(scene: Scene) -> Report:
    """Structural checks every scene gets: omega, X_H, action and moment map."""
    rep = Report(f"check {scene.name}")
    if scene.algebra is not None:
        rep.add("lie_algebra.jacobi", not scene.algebra.jacobi_failures())
    if scene.action is not None:
        rep.add("action.anti_homomorphism", not scene.action.homomorphism_failures())
    if scene.system is not None:
        s = scene.system
        rep.add("omega.nplectic", s.report.ok, note=str(s.report))
        if s.hamiltonian is not None:
            rep.residual("hamiltonian.field", s.ham_pair.residual(s.omega), matched_sign=s.sign, witness=str(s.x_h))
        for nm, x in scene.mvfs.items():
            if x.degree and not lie_derivative(x, s.omega):
                rep.info(f"mvf.{nm}.preserves_omega", "yes")
    if scene.moment_map is not None:
        rep.extend(moment_report(scene))
    if scene.phase_space is not None:
        rep.add("phase_space.nplectic", scene.phase_space.check().ok)
    if scene.g2 is not None:
        g = scene.g2
        bad = [(i, j) for i in range(7) for j in range(7) if metric_identity_residual(i, j, g)]
        rep.add("g2.metric_identity", not bad, note=f"{49 - len(bad)}/49 basis pairs")
        rep.residual("g2.phi_closed", ext_d(g.phi))
    return rep


def moment_report(scene: Scene, kind: Optional[Kind] = None) -> Report:
    m = scene.moment_map
    if m is None:
        raise SceneError("scene has no moment_map section")
    kind = kind or m.kind
    rep = Report(f"moment {scene.name} --{kind.value.lower()}")
    if kind is Kind.FULL and m.kind is not Kind.FULL:
        raise SceneError("scene stores a weak moment map")
    checks = full_moment_verify(m) if kind is Kind.FULL else weak_moment_verify(m)
    for c in checks:
        rep.add(f"{kind.value.lower()}.f_{c.k}({c.p})", c.ok, c.residual, matched_sign=c.matched_sign)
    return rep


def classify_report(scene: Scene, form: Optional[str] = None, mvf: Optional[str] = None) -> Report:
    _need_system(scene)
    s = scene.system
    if form is not None:
        alpha = scene.form(form)
        rep = Report(f"classify {scene.name} --form {form}")
        rep.info("exactness", classify_closed_exact(alpha))
        pair = _solve_pair(alpha, scene)
        rep.info("hamiltonian_field", pair.field)
        if s.hamiltonian is not None:
            c = classify_conserved(pair, s, form)
            rep.info("conserved", c.level, witness=None if c.witness is None else str(c.witness), note=f"L_X_H = {c.value}")
            res = noether_residual(pair, s)
            rep.residual("noether_1", res.res1)
            rep.residual("noether_2", res.res2)
        return rep
    if mvf is not None:
        x = scene.mvf(mvf)
        rep = Report(f"classify {scene.name} --mvf {mvf}")
        rep.add("preserves_omega", not lie_derivative(x, s.omega), lie_derivative(x, s.omega))
        if s.hamiltonian is not None and not lie_derivative(x, s.omega):
            c = classify_symmetry(x, s, mvf)
            rep.info("symmetry", c.level, witness=None if c.witness is None else str(c.witness), note=f"L_X H = {c.value}")
        return rep
    raise SceneError("classify needs --form or --mvf")


def bracket_report(scene: Scene, poisson_names=None, schouten_names=None) -> Report:
    if poisson_names:
        _need_system(scene)
        a_name, b_name = poisson_names
        rep = Report(f"bracket {scene.name} --poisson {a_name} {b_name}")
        a, b = _solve_pair(scene.form(a_name), scene), _solve_pair(scene.form(b_name), scene)
        rep.info("result", poisson(a, b, scene.system.omega))
        rep.info("field", schouten(a.ham_field, b.ham_field) if a.field.degree and b.field.degree else "0")
        rep.residual("bracket_is_hamiltonian", poisson_schouten_residual(a, b, scene.system.omega))
        return rep
    if schouten_names:
        x_name, y_name = schouten_names
        rep = Report(f"bracket {scene.name} --schouten {x_name} {y_name}")
        rep.info("result", schouten(scene.mvf(x_name), scene.mvf(y_name)))
        return rep
    raise SceneError("bracket needs --poisson or --schouten")


# ---- example suites -----------------------------------------------------------


def _r3_noether(scene: Scene, rep: Report) -> None:
    s = scene.system
    c = scene.chart
    rep.add("X_H = d/dz", s.ham_pair.ham_field == parse_mvf("d/dz", c), witness=str(s.ham_pair.ham_field))
    alpha = scene.form("alpha")
    xa = scene.mvf("X_alpha")
    hv = hamiltonian_verify(alpha, xa, s.omega)
    rep.add("X_alpha = d/dy", hv.ok, hv.residual, matched_sign=hv.sign_matched)
    pair = HamPair(alpha, xa, hv.sign_matched or 1)
    rep.residual("L_X_alpha H = 0", lie_derivative(xa, s.hamiltonian))
    rep.residual("L_X_H alpha = dx", lie_derivative(s.x_h, alpha) - parse_form("dx", c))
    res = noether_residual(pair, s)
    rep.residual("noether_1", res.res1)
    rep.residual("noether_2", res.res2)
    rep.residual("conserved_interior", conserved_interior_residual(pair, s))
    cons = classify_conserved(pair, s, "alpha")
    rep.add("alpha globally conserved", cons.level >= Level.GLOBAL, note=str(cons.level), witness=str(cons.witness))
    sym = classify_symmetry(xa, s, "X_alpha")
    rep.add("X_alpha strict symmetry", sym.level is Level.STRICT, note=str(sym.level))


def _r6_translation(scene: Scene, rep: Report) -> None:
    s, m = scene.system, scene.moment_map
    rep.residual("S -| omega = dH", contract(scene.mvf("S"), s.omega) - ext_d(s.hamiltonian))
    for c in weak_moment_verify(m):
        rep.add(f"weak.f_{c.k}({c.p})", c.ok, c.residual, matched_sign=c.matched_sign)
    pres = action_preserves_h(m)
    rep.add("action globally preserves H", pres.summary == "globally preserves H", note=pres.summary)
    rep.add("preservation implications", pres.implications_hold)
    for r in pres.conserved:
        rep.add(f"{r.subject} conserved", r.level >= Level.GLOBAL, note=str(r.level))
    for r in pres.symmetries:
        rep.add(f"{r.subject} symmetry", r.level >= Level.GLOBAL, note=str(r.level))
    sig = sigma_equivariance(m)
    rep.add("sigma values closed", all(v.closed for v in sig))
    rep.info("equivariant", "yes" if is_equivariant(m) else "no")
    g = m.action.algebra
    for p, q in (("e1", "e2"), ("e1", "e2^e3")):
        r = morphism_closed_check(m, parse_gmulti(p, g), parse_gmulti(q, g))
        rep.add(f"difference closed {{f({p}), f({q})}}", r.level >= Level.LOCAL, note=str(r.level))
    for c in m.components[1]:
        rep.residual(f"conserved_interior f_1({c.p})", conserved_interior_residual(m.ham_pair(c.p), s))


def _c3_volume(scene: Scene, rep: Report) -> None:
    s = scene.system
    a, b = scene.mvf("A"), scene.mvf("B")
    d_re = ext_d(scene.form("re123"))
    rep.residual("B -| A -| alpha = -1/4 dRe(z1z2z3)", contract(b, contract(a, s.omega)) + d_re * Fraction(1, 4))
    f = {str(c.p): c.form for cs in scene.moment_map.components.values() for c in cs}
    rep.residual("A -| alpha = d f_1(a)", contract(a, s.omega) - ext_d(f["a"]))
    rep.residual("B -| alpha = d f_1(b)", contract(b, s.omega) - ext_d(f["b"]))


def _c3_kahler(scene: Scene, rep: Report) -> None:
    s = scene.system
    c = scene.chart
    for v, i in (("A", 1), ("B", 2)):
        n = parse_form(f"x{i}^2 + y{i}^2 - x3^2 - y3^2", c, 0)
        rep.residual(f"{v} -| omega = -1/4 d(|z{i}|^2 - |z3|^2)", contract(scene.mvf(v), s.omega) + ext_d(n) * Fraction(1, 4))


def _phase_demo(scene: Scene, rep: Report) -> None:
    ps = scene.phase_space
    cfg = scene.data["phase_space"]
    base = ps.base
    ys = {k: parse_mvf(v, base) for k, v in cfg.get("fields", {}).items()}
    alphas = {k: parse_form(v, base) for k, v in cfg.get("forms", {}).items()}
    for nm, y in ys.items():
        lift = complete_lift(y, ps)
        rep.add(f"lift {nm}", not lie_derivative(lift, ps.theta) and ps.push(lift) == y, witness=str(lift))
        rep.residual(f"dP({nm}) + {nm}# -| omega", momentum_residual([y], ps))
    for nm, a in alphas.items():
        rep.add(f"position {nm} push zero", push_zero_check(a, ps), witness=str(position_form(a, ps)))
    names = list(ys)
    a_list = list(alphas.values())
    for i, n1 in enumerate(names):
        for n2 in names[i:]:
            r = momentum_bracket_residuals([ys[n1]], [ys[n2]], a_list[0], ps, a_list[-1])
            rep.residual(f"{{P({n1}),P({n2})}} relation", r.momentum)
            rep.residual(f"{{pi*a,P({n2})}} relation", r.mixed)
    r = momentum_bracket_residuals([ys[names[0]]], [ys[names[-1]]], a_list[0], ps, a_list[-1])
    rep.residual("{pi*a, pi*b} = 0", r.position)


def _g2_torus(scene: Scene, rep: Report) -> None:
    g = scene.g2
    a, b = scene.mvf("A"), scene.mvf("B")
    d_re = ext_d(scene.form("re123"))
    f = {str(c.p): c.form for cs in scene.moment_map.components.values() for c in cs}
    for nm, v in (("a", a), ("b", b)):
        h = g2_hamiltonian_check(f[nm], g)
        rep.residual(f"pi14(d f_1({nm})) = 0", pi14(ext_d(f[nm]), g))
        rep.add(f"curl(f_1({nm})#) = 3 V", h.curl == v * 3, witness=str(h.curl))
        rep.add(f"Hamiltonian field of f_1({nm}) = V", h.field == v, matched_sign=h.matched_sign)
        rep.info(f"curl(f_1({nm})#) = V as printed", "holds" if h.curl == v else "does not hold", note="curl is three times the field")
    rep.residual("4 (A x B)^flat = -dRe(z1z2z3)", flat(cross(a, b, g), g) * 4 + d_re)
    rep.info("4 (A x B)^flat = +dRe(z1z2z3) as printed", "holds" if flat(cross(a, b, g), g) * 4 == d_re else "does not hold")
    rep.residual("B -| A -| phi = -1/4 dRe(z1z2z3)", contract(b, contract(a, g.phi)) + d_re * Fraction(1, 4))
    pa, pb = g2_pair(f["a"], g), g2_pair(f["b"], g)
    br = g2_bracket_is_cross_check(pa, pb, g)
    rep.residual("{f_1(a), f_1(b)} = (X_a x X_b)^flat", br.field_residual)
    rep.residual("{f_1(a), f_1(b)} = -d f_2(a^b)", br.bracket + ext_d(f["a^b"]))


_SUITES = {
    "r3-noether": _r3_noether,
    "r6-translation": _r6_translation,
    "c3-volume": _c3_volume,
    "c3-kahler": _c3_kahler,
    "phase-demo": _phase_demo,
    "g2-torus": _g2_torus,
}


def run_builtin(name: str) -> Report:
    scene = builtin_scene(name)
    rep = check_scene(scene)
    rep.command = f"example {name}"
    _SUITES[name](scene, rep)
    return rep


def run_scene_suite(scene: Scene) -> Report:
    """Generic checks plus the example suite when the scene carries a built-in name."""
    rep = check_scene(scene)
    if scene.name in _SUITES:
        _SUITES[scene.name](scene, rep)
    return rep


def g2_structure_report() -> Report:
    rep = Report("g2 structure")
    for pres in (FLAT7, "RPlusC3"):
        g = standard_g2(pres)
        bad = [(i, j) for i in range(7) for j in range(7) if metric_identity_residual(i, j, g)]
        rep.add(f"{pres} metric identity", not bad)
        rep.add(f"{pres} star(phi) = psi", hodge_star(g.phi, g) == g.psi)
    gf, gc = standard_g2(FLAT7), standard_g2("RPlusC3")
    rep.add("Flat7 and RPlusC3 agree", flat7_to_c3(gf.phi, gf, gc) == gc.phi and flat7_to_c3(gf.vol, gf, gc) == gc.vol)
    return rep


__all__ = [
    "BUILTIN_NAMES",
    "bracket_report",
    "check_scene",
    "classify_report",
    "g2_structure_report",
    "moment_report",
    "run_builtin",
    "run_scene_suite",
]
