import json
import subprocess
import sys

import pytest

from msgeom.cli import main
from msgeom.scenes import (
    BUILTIN_DATA,
    BUILTIN_NAMES,
    SceneError,
    builtin_scene,
    dump_scene,
    load_scene,
    save_scene,
    scene_from_dict,
    shipped_scene_path,
)


@pytest.fixture
def scene_file(tmp_path):
    def write(data):
        p = tmp_path / "scene.json"
        p.write_text(json.dumps(data))
        return str(p)

    return write


R3 = {
    "name": "mine",
    "chart": ["x", "y", "z"],
    "forms": {"omega": "dx^dy^dz", "H": "-x*dy", "alpha": "z*dx", "beta": "x*dx"},
    "mvfs": {"X": "d/dy", "Y": "y*d/dz"},
    "system": {"omega": "omega", "hamiltonian": "H"},
}


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_round_trip(name, tmp_path):
    s = builtin_scene(name)
    p = tmp_path / f"{name}.json"
    save_scene(s, p)
    again = load_scene(p)
    assert again == s
    assert dump_scene(again) == dump_scene(s)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_shipped_files_match_builtins(name):
    assert load_scene(shipped_scene_path(name)) == builtin_scene(name)


def test_unknown_builtin():
    with pytest.raises(SceneError, match="unknown example"):
        builtin_scene("nope")


@pytest.mark.parametrize(
    "patch, match",
    [
        ({"chart": ["x", "x"]}, None),
        ({"forms": {"omega": "dx^dq"}}, "omega"),
        ({"mvfs": {"X": "d/dx +"}}, "X"),
        ({"system": {"omega": "missing"}}, "missing"),
        ({"system": {"omega": "omega", "hamiltonian": "alpha", "field": "X", "sign": 1}}, None),
    ],
)
def test_bad_scenes_rejected(patch, match):
    data = {**R3, **patch}
    with pytest.raises(ValueError, match=match):
        scene_from_dict(data)


def test_bad_jacobi_table_rejected():
    data = json.loads(json.dumps(BUILTIN_DATA["g2-torus"]))
    data["lie_algebra"] = {"names": ["a", "b", "c"], "brackets": ["[a,b] = c", "[b,c] = b", "[a,c] = c"]}
    with pytest.raises(ValueError, match="Jacobi"):
        scene_from_dict(data)


def test_missing_file(tmp_path):
    with pytest.raises(SceneError, match="cannot read"):
        load_scene(tmp_path / "none.json")


def test_invalid_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{")
    with pytest.raises(SceneError, match="invalid JSON"):
        load_scene(p)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_examples_exit_zero(name, capsys):
    assert main(["example", name]) == 0
    out = capsys.readouterr().out
    assert out.startswith(f"== example {name}") and "0 failed" in out


def test_json_output_is_deterministic(capsys):
    main(["example", "r3-noether", "--json"])
    first = capsys.readouterr().out
    main(["--json", "example", "r3-noether"])
    assert capsys.readouterr().out == first
    d = json.loads(first)
    assert d["summary"]["fail"] == 0
    assert {c["status"] for c in d["checks"]} <= {"pass", "info"}


def test_check_subcommand(scene_file, capsys):
    assert main(["check", scene_file(R3)]) == 0
    assert "[PASS]" in capsys.readouterr().out


def test_classify_exit_codes(scene_file, capsys):
    path = scene_file(R3)
    assert main(["classify", path, "--form", "alpha"]) == 0
    assert main(["classify", path, "--mvf", "X"]) == 0
    out = capsys.readouterr().out
    assert "alpha" in out


def test_classify_reports_levels(scene_file, capsys):
    path = scene_file(R3)
    assert main(["classify", path, "--mvf", "Y"]) == 0
    assert "Strict" in capsys.readouterr().out
    assert main(["classify", path, "--form", "beta"]) == 0
    assert "ClosedExact" in capsys.readouterr().out


def test_bracket_subcommand(scene_file, capsys):
    path = scene_file(R3)
    assert main(["bracket", path, "--schouten", "X", "Y"]) == 0
    assert "d/dz" in capsys.readouterr().out
    assert main(["bracket", path, "--poisson", "alpha", "H"]) == 0
    assert "-dx" in capsys.readouterr().out


def test_input_errors_exit_two(scene_file, tmp_path, capsys):
    path = scene_file(R3)
    assert main(["classify", path, "--form", "nope"]) == 2
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    assert main(["moment", path]) == 2
    assert main(["fuzz", "--suite", "homotopy", "--count", "0"]) == 2
    err = capsys.readouterr().err
    assert err.count("msg: error:") == 4


def test_failing_moment_map_exits_one(scene_file, capsys):
    data = json.loads(json.dumps(BUILTIN_DATA["c3-kahler"]))
    entries = data["moment_map"]["entries"]
    entries[0]["form"] = "0" if entries[0]["form"] != "0" else "1"
    assert main(["moment", scene_file(data)]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        main(["example", "not-a-scene"])
    assert e.value.code == 2
    capsys.readouterr()


def test_fuzz_subcommand(capsys):
    assert main(["fuzz", "--suite", "homotopy", "--count", "5", "--seed", "3"]) == 0
    assert "5/5 instances" in capsys.readouterr().out


def test_console_entry_point_module():
    out = subprocess.run(
        [sys.executable, "-m", "msgeom.cli", "example", "c3-kahler"], capture_output=True, text=True, check=False
    )
    assert out.returncode == 0, out.stderr
