"""``dillscope`` command line: classify, distance, simulate, verify.

Exit codes: 0 success, 2 usage or parse errors, 3 orbit blow-up.  ``verify``
also exits 1 when a check fails.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import analysis, metrics, reproduce
from .catalog import BUILTIN_NAMES, builtin
from .diagram import space_time, write_atomic
from .dillmap import DillMap, OrbitBlowUp, RuleParseError, load_rule
from .words import InfiniteWordSpec, parse_spec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def resolve_rule(ref: str) -> DillMap:
    """A built-in name or a path to a rule file."""
    path = Path(ref)
    if path.exists():
        return load_rule(path)
    if ref in BUILTIN_NAMES:
        return builtin(ref)
    raise UsageError(f"{ref}: no such rule file or built-in rule")


def resolve_spec(text: str, alphabet=None) -> InfiniteWordSpec:
    try:
        return parse_spec(text, alphabet, rules=resolve_rule)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_lengths(text: str) -> list[int]:
    try:
        if text.startswith("geometric:"):
            lo, hi = (int(v) for v in text.split(":", 1)[1].split(","))
            lengths = metrics.geometric_lengths(lo, hi)
        else:
            lengths = [int(v) for v in text.split(",") if v.strip()]
        return metrics._check_lengths(lengths)
    except ValueError as exc:
        raise UsageError(f"bad --lengths {text!r}: {exc}") from None


def cmd_classify(args) -> int:
    F = resolve_rule(args.rule)
    sys.stdout.write(analysis.report_json(analysis.classify(F)))
    return EXIT_OK


def cmd_distance(args) -> int:
    x, y = resolve_spec(args.x), resolve_spec(args.y)
    if x.alphabet.size != y.alphabet.size:
        raise UsageError(f"alphabet mismatch: {args.x} has {x.alphabet.size} letters, "
                         f"{args.y} has {y.alphabet.size}")
    lengths = parse_lengths(args.lengths)
    if args.kind.startswith("weyl-"):
        try:
            c = metrics.weyl_curve(args.kind[len("weyl-"):], x, y, lengths)
        except TypeError as exc:
            raise UsageError(str(exc)) from None
    else:
        c = metrics.curve(args.kind, x, y, lengths)
    write_atomic(args.out, c.to_csv())
    return EXIT_OK


def cmd_simulate(args) -> int:
    F = resolve_rule(args.rule)
    x = resolve_spec(args.x, F.alphabet)
    if x.alphabet.size > F.alphabet.size:
        raise UsageError(f"word {args.x} does not lie in the alphabet of {args.rule}")
    if args.steps < 1 or args.width < 1:
        raise UsageError("--steps and --width must be positive")
    write_atomic(args.out, space_time(F, x, args.steps, args.width))
    return EXIT_OK


def cmd_verify(args) -> int:
    ids = None if args.experiment == "all" else [args.experiment]
    if ids and ids[0] not in reproduce.EXPERIMENTS:
        raise UsageError(f"unknown experiment {args.experiment!r}; "
                         f"choose from: all, {', '.join(reproduce.EXPERIMENTS)}")
    outcomes = reproduce.run(ids)
    if args.out:
        out = Path(args.out)
        for o in outcomes:
            for name, data in o.artifacts.items():
                write_atomic(out / name, data)
        write_atomic(out / "verify.json", reproduce.summary_json(outcomes))
    sys.stdout.write(reproduce.summary_json(outcomes) if args.json else reproduce.table(outcomes))
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dillscope",
        description="Edit-distance pseudo-metrics and dill map dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classification report as JSON")
    p.add_argument("rule", help="rule file or built-in name")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("distance", help="normalized distance curve as CSV")
    p.add_argument("--kind", required=True,
                   choices=["hamming", "levenshtein", "weyl-hamming", "weyl-levenshtein"])
    p.add_argument("--x", required=True, help="word spec, e.g. 1(0)^inf or fix(thue_morse,0)")
    p.add_argument("--y", required=True)
    p.add_argument("--lengths", default="geometric:6,20",
                   help="comma-separated lengths or geometric:a,b for 2^a..2^b")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("simulate", help="space-time diagram as PPM")
    p.add_argument("rule")
    p.add_argument("--x", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the reproduction suite")
    p.add_argument("experiment", nargs="?", default="all")
    p.add_argument("--json", action="store_true", help="print the summary as JSON")
    p.add_argument("--out", help="directory for JSON/CSV/PPM artifacts")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, RuleParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OrbitBlowUp as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
