"""Command-line entry point.

    qwmix run <config.yaml> [--out DIR] [--threads N] [--seed N]
    qwmix selftest [--criteria LIST] [--fault NAME]

Exit codes: 0 success, 2 configuration error, 3 numerical-contract
violation (including failed selftest criteria), 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .atom import NumericalContractViolation
from .config import ConfigError, load_config
from .runner import run_scenario
from .selftest import CRITERIA, run_selftest

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwmix",
        description="Two-tone wave mixing on a single artificial atom: "
                    "scenario runner and acceptance selftest.")
    parser.add_argument("--version", action="version", version=f"qwmix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a scenario configuration")
    run_p.add_argument("config", help="path to the YAML scenario file")
    run_p.add_argument("--out", default=None, help="output directory "
                       "(overrides output.directory)")
    run_p.add_argument("--threads", type=int, default=None,
                       help="worker pool size (default: available parallelism)")
    run_p.add_argument("--seed", type=int, default=None,
                       help="reserved; recorded in the manifest, pipeline is "
                       "deterministic")

    self_p = sub.add_parser("selftest", help="run the acceptance criteria")
    self_p.add_argument("--criteria", default=None,
                        help=f"comma-separated subset of {','.join(CRITERIA)}")
    self_p.add_argument("--fault", action="append", default=[],
                        help=argparse.SUPPRESS)  # test hook, e.g. 'bessel'
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_selftest(args)


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_scenario(config, threads=args.threads, out_dir=args.out,
                              seed=args.seed)
    except NumericalContractViolation as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    n_spec = len(result.spectra)
    print(f"wrote {n_spec} spectrum file set(s) to {result.out_dir}")
    if result.table_file:
        print(f"wrote sweep table {result.table_file}")
    print(f"wrote manifest {result.manifest_file}")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    criteria = None
    if args.criteria:
        criteria = [c.strip().upper() for c in args.criteria.split(",") if c.strip()]
    try:
        ok, _ = run_selftest(criteria=criteria, faults=frozenset(args.fault),
                             stream=sys.stdout)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK if ok else EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
