"""Scene files: a JSON object tree naming a chart, forms, fields, an algebra
with its action, a plectic system and an optional moment map.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from .exterior import Form, MultiVector
from .g2 import G2Structure, standard_g2
from .lie import ActionModel, LieAlg, parse_bracket_table, parse_gmulti
from .noether import Component, Kind, MomentMapData
from .parsing import ParseError, parse_form, parse_mvf
from .phase import PhaseSpace, build_phase_space
from .plectic import PlecticSystem
from .symbolic import Chart

SCENE_DIR = Path(__file__).with_name("scenes")


class SceneError(ValueError):
    """Malformed or inconsistent scene input."""


@dataclass
class Scene:
    name: str
    chart: Chart
    forms: dict[str, Form] = field(default_factory=dict)
    mvfs: dict[str, MultiVector] = field(default_factory=dict)
    algebra: Optional[LieAlg] = None
    action: Optional[ActionModel] = None
    system: Optional[PlecticSystem] = None
    moment_map: Optional[MomentMapData] = None
    phase_space: Optional[PhaseSpace] = None
    g2: Optional[G2Structure] = None
    data: dict = field(default_factory=dict, repr=False)

    def form(self, name: str) -> Form:
        try:
            return self.forms[name]
        except KeyError:
            raise SceneError(f"unknown form {name!r}") from None

    def mvf(self, name: str) -> MultiVector:
        try:
            return self.mvfs[name]
        except KeyError:
            raise SceneError(f"unknown multivector field {name!r}") from None

    def canonical(self) -> dict:
        """Scene data with every expression in canonical printed form."""
        d = copy.deepcopy(self.data)
        d["chart"] = list(self.chart.names)
        d["forms"] = {k: str(v) for k, v in self.forms.items()}
        d["mvfs"] = {k: str(v) for k, v in self.mvfs.items()}
        if self.moment_map is not None:
            entries = []
            for k in sorted(self.moment_map.components):
                for c in self.moment_map.components[k]:
                    entries.append({"p": str(c.p), "form": str(c.form), "sign": c.sign})
            d["moment_map"] = {"kind": self.moment_map.kind.value, "entries": entries}
        return d

    def __eq__(self, other) -> bool:
        return isinstance(other, Scene) and self.name == other.name and self.canonical() == other.canonical()


def _req(d: dict, key: str, where: str):
    if key not in d:
        raise SceneError(f"{where}: missing {key!r}")
    return d[key]


def _expr(text: Any, chart: Chart, cls, where: str, degree=None):
    if not isinstance(text, str):
        raise SceneError(f"{where}: expected an expression string")
    try:
        if cls is Form:
            return parse_form(text, chart, degree)
        return parse_mvf(text, chart)
    except ParseError as e:
        raise SceneError(f"{where}: {e}") from None
    except ValueError as e:
        raise SceneError(f"{where}: {e}") from None


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise SceneError("scene must be a JSON object")
    data = copy.deepcopy(data)
    name = data.get("name", "scene")

    g2 = None
    if "g2" in data:
        try:
            g2 = standard_g2(data["g2"])
        except ValueError as e:
            raise SceneError(f"g2: {e}") from None

    ps = None
    if "phase_space" in data:
        cfg = data["phase_space"]
        try:
            ps = build_phase_space(Chart(tuple(_req(cfg, "base", "phase_space"))), int(_req(cfg, "k", "phase_space")))
        except (ValueError, TypeError) as e:
            raise SceneError(f"phase_space: {e}") from None

    if "chart" in data:
        try:
            chart = Chart(tuple(data["chart"]))
        except (ValueError, TypeError) as e:
            raise SceneError(f"chart: {e}") from None
    elif g2 is not None:
        chart = g2.chart
    elif ps is not None:
        chart = ps.chart
    else:
        raise SceneError("scene: missing 'chart'")
    if g2 is not None and chart != g2.chart:
        raise SceneError(f"chart must be {list(g2.chart.names)} for the {g2.presentation} structure")
    if ps is not None and chart != ps.chart:
        raise SceneError(f"chart must be {list(ps.chart.names)} for the phase space")

    forms = {k: _expr(v, chart, Form, f"forms.{k}") for k, v in data.get("forms", {}).items()}
    if g2 is not None:
        forms.setdefault("phi", g2.phi)
        if forms["phi"] != g2.phi:
            raise SceneError("forms.phi differs from the standard G2 form")
    if ps is not None:
        forms.setdefault("theta", ps.theta)
        forms.setdefault("omega", ps.omega)
    mvfs = {k: _expr(v, chart, MultiVector, f"mvfs.{k}") for k, v in data.get("mvfs", {}).items()}
    scene = Scene(name, chart, forms, mvfs, g2=g2, phase_space=ps, data=data)

    if "lie_algebra" in data:
        la = data["lie_algebra"]
        try:
            scene.algebra = parse_bracket_table(
                list(_req(la, "names", "lie_algebra")), la.get("brackets", []), la.get("label", "")
            )
        except ValueError as e:
            raise SceneError(f"lie_algebra: {e}") from None
        if scene.algebra.jacobi_failures():
            raise SceneError("lie_algebra: bracket table violates the Jacobi identity")

    if "action" in data:
        if scene.algebra is None:
            raise SceneError("action: needs a lie_algebra section")
        act = data["action"]
        gens = []
        for e in scene.algebra.names:
            ref = _req(act, e, "action")
            gens.append(mvfs[ref] if ref in mvfs else _expr(ref, chart, MultiVector, f"action.{e}"))
        try:
            scene.action = ActionModel(scene.algebra, chart, gens)
        except ValueError as e:
            raise SceneError(f"action: {e}") from None

    if "system" in data:
        sy = data["system"]
        omega = scene.form(_req(sy, "omega", "system"))
        h = scene.form(sy["hamiltonian"]) if sy.get("hamiltonian") else None
        xh = scene.mvf(sy["field"]) if sy.get("field") else None
        try:
            scene.system = PlecticSystem(omega, h, xh, int(sy.get("sign", 1)))
        except ValueError as e:
            raise SceneError(f"system: {e}") from None

    if "moment_map" in data:
        if scene.action is None or scene.system is None:
            raise SceneError("moment_map: needs action and system sections")
        mm = data["moment_map"]
        try:
            kind = Kind(mm.get("kind", "Weak"))
        except ValueError:
            raise SceneError(f"moment_map: unknown kind {mm.get('kind')!r}") from None
        comps: dict[int, list[Component]] = {}
        for i, ent in enumerate(_req(mm, "entries", "moment_map")):
            where = f"moment_map.entries[{i}]"
            try:
                p = parse_gmulti(_req(ent, "p", where), scene.algebra)
            except ValueError as e:
                raise SceneError(f"{where}: {e}") from None
            ftext = _req(ent, "form", where)
            f = forms[ftext] if ftext in forms else _expr(ftext, chart, Form, where)
            if "k" in ent and int(ent["k"]) != p.degree:
                raise SceneError(f"{where}: k does not match the degree of p")
            comps.setdefault(p.degree, []).append(Component(p, f, int(ent.get("sign", 1))))
        try:
            scene.moment_map = MomentMapData(scene.system, scene.action, comps, kind)
        except ValueError as e:
            raise SceneError(f"moment_map: {e}") from None
    return scene


def load_scene(path: Union[str, Path]) -> Scene:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SceneError(f"cannot read {path}: {e.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SceneError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return scene_from_dict(data)


def dump_scene(scene: Scene) -> str:
    return json.dumps(scene.canonical(), indent=2, ensure_ascii=False) + "\n"


def save_scene(scene: Scene, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_scene(scene), encoding="utf-8")


# ---- built-in scenes ---------------------------------------------------------

_C3 = ["x1", "x2", "x3", "y1", "y2", "y3"]
_TORUS_A = "1/2*(-y1*d/dx1 + y3*d/dx3 + x1*d/dy1 - x3*d/dy3)"
_TORUS_B = "1/2*(-y2*d/dx2 + y3*d/dx3 + x2*d/dy2 - x3*d/dy3)"
# Re(z1 z2 z3), Im(z1 z3 dz2), -Im(z2 z3 dz1)
_RE123 = "x1*x2*x3 - x1*y2*y3 - y1*x2*y3 - y1*y2*x3"
_IM_A = "1/2*((x1*y3 + x3*y1)*dx2 + (x1*x3 - y1*y3)*dy2)"
_IM_B = "-1/2*((x2*y3 + x3*y2)*dx1 + (x2*x3 - y2*y3)*dy1)"
_TORUS_ALG = {"names": ["a", "b"], "brackets": [], "label": "t2"}

BUILTIN_DATA: dict[str, dict] = {
    "r3-noether": {
        "name": "r3-noether",
        "chart": ["x", "y", "z"],
        "forms": {"omega": "dx^dy^dz", "H": "-x*dy", "alpha": "z*dx"},
        "mvfs": {"X_H": "d/dz", "X_alpha": "d/dy"},
        "system": {"omega": "omega", "hamiltonian": "H", "field": "X_H", "sign": 1},
    },
    "r6-translation": {
        "name": "r6-translation",
        "chart": ["q1", "q2", "q3", "p1", "p2", "p3"],
        "forms": {
            "omega": "dq1^dq2^dq3^dp1^dp2^dp3",
            "H": "1/2*((p1*q2*dq3 - p1*q3*dq2) + (p2*q3*dq1 - p2*q1*dq3) + (p3*q1*dq2 - p3*q2*dq1))*dp1^dp2^dp3",
        },
        "mvfs": {"S": "p1*d/dq1 + p2*d/dq2 + p3*d/dq3", "V1": "d/dq1", "V2": "d/dq2", "V3": "d/dq3"},
        "lie_algebra": {"names": ["e1", "e2", "e3"], "brackets": [], "label": "r3"},
        "action": {"e1": "V1", "e2": "V2", "e3": "V3"},
        "system": {"omega": "omega", "hamiltonian": "H", "field": "S", "sign": -1},
        "moment_map": {
            "kind": "Full",
            "entries": [
                {"p": "e1", "form": "1/2*(q2*dq3 - q3*dq2)*dp1^dp2^dp3", "sign": -1},
                {"p": "e2", "form": "1/2*(q1*dq3 - q3*dq1)*dp1^dp2^dp3", "sign": 1},
                {"p": "e3", "form": "1/2*(q1*dq2 - q2*dq1)*dp1^dp2^dp3", "sign": -1},
                {"p": "e1^e2", "form": "q3*dp1^dp2^dp3", "sign": -1},
                {"p": "e1^e3", "form": "q2*dp1^dp2^dp3", "sign": 1},
                {"p": "e2^e3", "form": "q1*dp1^dp2^dp3", "sign": -1},
                {"p": "e1^e2^e3", "form": "1/3*(p1*dp2^dp3 + p2*dp3^dp1 + p3*dp1^dp2)", "sign": 1},
            ],
        },
    },
    "c3-volume": {
        "name": "c3-volume",
        "chart": _C3,
        "forms": {
            "alpha": "dx1^dx2^dx3 - dx1^dy2^dy3 - dy1^dx2^dy3 - dy1^dy2^dx3",
            "re123": _RE123,
        },
        "mvfs": {"A": _TORUS_A, "B": _TORUS_B},
        "lie_algebra": _TORUS_ALG,
        "action": {"a": "A", "b": "B"},
        "system": {"omega": "alpha"},
        "moment_map": {
            "kind": "Weak",
            "entries": [
                {"p": "a", "form": _IM_A, "sign": -1},
                {"p": "b", "form": _IM_B, "sign": -1},
                {"p": "a^b", "form": f"1/4*({_RE123})", "sign": 1},
            ],
        },
    },
    "c3-kahler": {
        "name": "c3-kahler",
        "chart": _C3,
        "forms": {"omega": "dx1^dy1 + dx2^dy2 + dx3^dy3"},
        "mvfs": {"A": _TORUS_A, "B": _TORUS_B},
        "lie_algebra": _TORUS_ALG,
        "action": {"a": "A", "b": "B"},
        "system": {"omega": "omega"},
        "moment_map": {
            "kind": "Weak",
            "entries": [
                {"p": "a", "form": "-1/4*(x1^2 + y1^2 - x3^2 - y3^2)", "sign": -1},
                {"p": "b", "form": "-1/4*(x2^2 + y2^2 - x3^2 - y3^2)", "sign": -1},
            ],
        },
    },
    "phase-demo": {
        "name": "phase-demo",
        "phase_space": {
            "base": ["q1", "q2", "q3"],
            "k": 2,
            "fields": {"Y1": "d/dq1", "Y2": "q1*d/dq2 - q2*d/dq1", "Y3": "q2*d/dq2 + q2*q3*d/dq3"},
            "forms": {"a": "q3*dq1", "b": "q1*q2"},
        },
        "system": {"omega": "omega"},
    },
    "g2-torus": {
        "name": "g2-torus",
        "g2": "RPlusC3",
        "forms": {"re123": _RE123},
        "mvfs": {"A": _TORUS_A, "B": _TORUS_B},
        "lie_algebra": _TORUS_ALG,
        "action": {"a": "A", "b": "B"},
        "system": {"omega": "phi"},
        "moment_map": {
            "kind": "Weak",
            "entries": [
                {"p": "a", "form": f"{_IM_A} + 1/4*(x1^2 + y1^2 - x3^2 - y3^2)*dt", "sign": -1},
                {"p": "b", "form": f"{_IM_B} + 1/4*(x2^2 + y2^2 - x3^2 - y3^2)*dt", "sign": -1},
                {"p": "a^b", "form": f"1/4*({_RE123})", "sign": 1},
            ],
        },
    },
}

BUILTIN_NAMES = tuple(BUILTIN_DATA)


def builtin_scene(name: str) -> Scene:
    try:
        data = BUILTIN_DATA[name]
    except KeyError:
        raise SceneError(f"unknown example {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    return scene_from_dict(data)


def shipped_scene_path(name: str) -> Path:
    return SCENE_DIR / f"{name}.json"
