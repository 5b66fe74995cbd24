"""Command-line interface.

Exit codes: 0 termination proved, 1 no proof found, 2 timeout, 3 error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .prover import Maybe, ProverConfig, Terminating, prove, render_proof
from .tpdb import ParseError, parse_trs


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termfilter",
        description="Termination prover for term rewrite systems based on "
                    "lexicographic path orders with argument filterings, "
                    "searched for by a single SAT call per pair problem.")
    parser.add_argument("file", help="rewrite system in the legacy .trs format")
    parser.add_argument("--order", choices=["lpo", "qlpo"], default="lpo",
                        help="strict or quasi precedence search (default: lpo)")
    parser.add_argument("--processor", choices=["thm5", "thm12"], default="thm12",
                        help="usable rules: thm5 = classical closure, "
                             "thm12 = filtered, chosen by the solver (default)")
    parser.add_argument("--solver", default="internal",
                        help="'internal' or 'external:<command>' (default: internal)")
    parser.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    parser.add_argument("--emit-dimacs", default=None, metavar="DIR",
                        help="write every CNF plus a variable manifest to DIR")
    parser.add_argument("--proof", action="store_true", help="print the proof steps")
    parser.add_argument("--dump-formula", action="store_true",
                        help="print each constraint formula as an s-expression DAG")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.solver != "internal" and not args.solver.startswith("external:"):
        print(f"error: bad --solver value {args.solver!r}", file=sys.stderr)
        return 3
    try:
        text = Path(args.file).read_text()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        trs = parse_trs(text)
    except ParseError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return 3

    config = ProverConfig(
        mode="quasi" if args.order == "qlpo" else "strict",
        processor=args.processor,
        solver=args.solver,
        timeout=args.timeout,
        emit_dimacs=args.emit_dimacs,
        dump_formula=args.dump_formula,
    )
    try:
        verdict = prove(trs, config)
    except Exception as exc:  # solver/verification failures are exit 3
        print(f"error: {exc}", file=sys.stderr)
        return 3

    if args.proof:
        print(render_proof(verdict))
    elif isinstance(verdict, Terminating):
        print("TERMINATING")
    elif isinstance(verdict, Maybe):
        print(f"MAYBE ({verdict.reason})")
    else:
        print("TIMEOUT")

    if isinstance(verdict, Terminating):
        return 0
    if isinstance(verdict, Maybe):
        return 1
    return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
