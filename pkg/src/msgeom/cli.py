"""``msg``: verify scenes, classify forms, compute brackets and run fuzz suites."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .fuzz import SUITES, run_suite
from .noether import Kind
from .parsing import ParseError
from .report import Report
from .scenes import BUILTIN_NAMES, SceneError, load_scene
from .verify import bracket_report, classify_report, moment_report, run_builtin, run_scene_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable report")

    p = argparse.ArgumentParser(prog="msg", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="verify everything a scene file declares")
    c.add_argument("scene")

    c = sub.add_parser("classify", parents=[common], help="conserved quantity / symmetry level")
    c.add_argument("scene")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--form", metavar="NAME")
    g.add_argument("--mvf", metavar="NAME")

    c = sub.add_parser("bracket", parents=[common], help="Poisson or Schouten bracket")
    c.add_argument("scene")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--poisson", nargs=2, metavar=("A", "B"))
    g.add_argument("--schouten", nargs=2, metavar=("X", "Y"))

    c = sub.add_parser("moment", parents=[common], help="verify the scene's moment map")
    c.add_argument("scene")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--weak", action="store_true")
    g.add_argument("--full", action="store_true")

    c = sub.add_parser("example", parents=[common], help="run a built-in example")
    c.add_argument("name", choices=BUILTIN_NAMES)

    c = sub.add_parser("fuzz", parents=[common], help="randomised identity checks")
    c.add_argument("--suite", required=True, choices=sorted(SUITES))
    c.add_argument("--count", type=int, default=200)
    c.add_argument("--seed", type=int, default=1)
    c.add_argument("--max-dim", type=int, default=4)
    c.add_argument("--max-deg", type=int, default=2)
    return p


def _fuzz_report(args) -> Report:
    res = run_suite(args.suite, args.count, args.seed, args.max_dim, args.max_deg)
    rep = Report(f"fuzz --suite {args.suite} --count {args.count} --seed {args.seed}")
    rep.add(f"{args.suite}: {res.passed}/{res.count} instances", res.ok)
    for i, name, text in res.failures:
        rep.add(f"instance {i} {name}", False, text)
    return rep


def _dispatch(args) -> Report:
    if args.command == "example":
        return run_builtin(args.name)
    if args.command == "fuzz":
        return _fuzz_report(args)
    scene = load_scene(args.scene)
    if args.command == "check":
        return run_scene_suite(scene)
    if args.command == "classify":
        return classify_report(scene, form=args.form, mvf=args.mvf)
    if args.command == "bracket":
        return bracket_report(scene, args.poisson, args.schouten)
    kind = Kind.FULL if args.full else Kind.WEAK if args.weak else None
    return moment_report(scene, kind)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    as_json = getattr(args, "json", False)
    try:
        rep = _dispatch(args)
    except (SceneError, ParseError, ValueError) as e:
        print(f"msg: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(rep.to_json() if as_json else rep.to_text())
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
