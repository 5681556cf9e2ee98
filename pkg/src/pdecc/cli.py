"""Command line entry point: pdecc COMMAND [FILE] [options]."""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .parser import SystemFileError, parse_system
from .report import COMMANDS, emit_report, exit_status, run_analysis

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pdecc", description="Compatibility conditions of linear PDE systems "
                "over Q(x1..xn): dimensions, Janet tabulars, generating CC, syzygies "
                "and resolutions.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="system file (default: standard input)")
    p.add_argument("--max-order", type=int, default=None,
                   help="cap on prolongations beyond the system order (default 10)")
    p.add_argument("--depth", type=int, default=None,
                   help="levels for dimension tables and the FI test (default 3)")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for random coordinate changes (default 0)")
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("max_order", "depth"):
        v = getattr(args, name)
        if v is not None and v < 1:
            print(f"pdecc: error: --{name.replace('_', '-')} must be >= 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        if args.file:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
    except OSError as e:
        print(f"pdecc: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        sf = parse_system(text)
    except SystemFileError as e:
        print(f"pdecc: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = run_analysis(sf, args.command, args.max_order, args.depth, args.seed)
    data = emit_report(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    status = exit_status(report)
    if status == EXIT_INVARIANT:
        print(f"pdecc: invariant check failed: {', '.join(report.failed_checks)}",
              file=sys.stderr)
    elif status == EXIT_PARTIAL:
        print("pdecc: partial result, a cap was reached", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
