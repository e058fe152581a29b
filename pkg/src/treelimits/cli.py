"""Command-line entry point: limitlen, treecheck, center, newton, compare."""
from __future__ import annotations

import argparse
import json
import sys

from .algebra import AlgebraError
from .curve import SpecError
from .expr import ParseError
from .limits import DriftError, NumericOverflowError
from .pipeline import (EXIT_DISAGREE, EXIT_INPUT, EXIT_NO_BLOWUP, EXIT_NON_ADDITIVE,
                       NO_BLOWUP_MESSAGE, load_config, newton_text, run_center, run_compare,
                       run_limit_report, run_newton, run_tree_check)
from .trees import TreeError


def _ts(text: str) -> list:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad sample list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty sample list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="treelimits",
                                 description="Limits of SL2 translation lengths along rational curves.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limitlen", help="limit length table and cross-checks")
    p.add_argument("spec")
    p.add_argument("--end", default=None, help="infinity or t0=VALUE (default: first end in spec)")
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--ts", type=_ts, default=None, help="comma-separated sample points")
    p.add_argument("--out", default=None, help="JSON report path; .txt and .tree written alongside")

    p = sub.add_parser("treecheck", help="four-point defect and tree reconstruction")
    p.add_argument("spec", nargs="?")
    p.add_argument("--end", default=None)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--metric-file", default=None, help="check a 'u v d' distance file instead")
    p.add_argument("--tree-out", default=None)

    p = sub.add_parser("center", help="approximate center of the generators at parameter t")
    p.add_argument("spec")
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("newton", help="Newton polygon and asymptotic exponents")
    p.add_argument("polynomial")
    p.add_argument("--numeric", action="store_true", help="compare with numeric branch tracking")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("compare", help="projective distance between numeric and limit lengths")
    p.add_argument("spec")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--end", default=None)
    return ap


def _dispatch(args, cfg) -> int:
    if args.command == "limitlen":
        report = run_limit_report(args.spec, args.end, args.radius, args.ts, args.out, cfg)
        sys.stdout.write(report.text)
        if report.failed:
            print("failed checks: " + ", ".join(report.failed), file=sys.stderr)
        return report.exit_code

    if args.command == "treecheck":
        if args.spec is None and args.metric_file is None:
            raise SpecError("give a spec or --metric-file")
        res = run_tree_check(args.spec, args.end, args.radius, cfg, args.metric_file)
        if res.exit_code == EXIT_NO_BLOWUP:
            print(NO_BLOWUP_MESSAGE)
            return res.exit_code
        print(f"four-point defect: {res.defect}")
        if res.exit_code == EXIT_NON_ADDITIVE:
            print("non-additive witness: " + " ".join(res.witness))
            return res.exit_code
        print(f"half-integer check: {res.half_integer}")
        if args.tree_out:
            from .pipeline import atomic_write
            atomic_write(args.tree_out, res.tree_text)
        else:
            sys.stdout.write(res.tree_text)
        return res.exit_code

    if args.command == "center":
        rep = run_center(args.spec, args.t, cfg)
        sys.stdout.write(rep.to_text())
        return 0 if rep.gap <= 1 else EXIT_DISAGREE

    if args.command == "newton":
        rep = run_newton(args.polynomial, args.numeric, cfg)
        sys.stdout.write(json.dumps(rep, indent=2) + "\n" if args.json else newton_text(rep))
        if args.numeric and not all(v["within_tolerance"] for v in rep["numeric"].values()):
            return EXIT_DISAGREE
        return 0

    if args.command == "compare":
        cmp = run_compare(args.spec, args.t, args.radius, args.end, cfg)
        print(f"projective sup distance at t={args.t:g}: {cmp.distance:.6f}")
        return 0
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config()
        return _dispatch(args, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SpecError, AlgebraError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DriftError as exc:
        print(f"basepoint check failed: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except TreeError as exc:
        print(f"tree error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericOverflowError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
