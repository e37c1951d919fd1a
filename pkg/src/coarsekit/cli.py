"""``coarsekit run <file>``: parse a program, run its jobs, write the report."""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .dsl import DslError, parse
from .runner import RunOptions, emit, program_digest, run


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coarsekit")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run every job of a program")
    r.add_argument("file")
    r.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
    r.add_argument("--scale-max", type=_rational, metavar="R", help="default cap for r2_max/r_max")
    r.add_argument("--window", type=_rational, metavar="N", help="default window radius around the origin")
    r.add_argument("--bands", type=int, default=8, metavar="K")
    r.add_argument("--jobs", type=int, default=1, metavar="N")
    r.add_argument("--timing", action="store_true", help="add wall time per job (breaks byte determinism)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"coarsekit: {exc}", file=sys.stderr)
        return 2
    try:
        prog = parse(text)
    except DslError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2
    opts = RunOptions(args.scale_max, args.window, args.bands, args.jobs, args.timing)
    records = run(prog, opts)
    digest = program_digest(text)
    if args.json == "-":
        sys.stdout.buffer.write(emit(records, "json", digest))
    else:
        if args.json:
            with open(args.json, "wb") as fh:
                fh.write(emit(records, "json", digest))
        sys.stdout.buffer.write(emit(records, "text", digest))
    return 1 if any(r.get("answer") == "ERROR" for r in records) else 0
