"""Command-line entry point.

Usage: ``vacuum-refine {sweep|filter-run|refine|diag} --config FILE
[--seed N] [--out PREFIX]``.  Exit codes: 0 on success, 1 on a runtime
numerical failure, 2 on configuration or parse problems.
"""

from __future__ import annotations

import argparse
import sys

from .config import load_config, with_overrides
from .errors import ConfigError, VacuumRefineError
from .experiments import cmd_diag, cmd_filter_run, cmd_refine, cmd_sweep

_COMMANDS = {
    "sweep": cmd_sweep,
    "filter-run": cmd_filter_run,
    "refine": cmd_refine,
    "diag": cmd_diag,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vacuum-refine",
        description="Adiabatic state preparation with ancilla-based eigenstate filtering.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, func in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=func.__doc__.splitlines()[0].lower())
        sub.add_argument("--config", required=True, help="path to a key/value config file")
        sub.add_argument("--seed", type=int, default=None, help="override estimation.seed")
        sub.add_argument("--out", default=None, help="override output.prefix")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = with_overrides(load_config(args.config), seed=args.seed, out=args.out)
        result = _COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except VacuumRefineError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    for line in result.lines:
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
