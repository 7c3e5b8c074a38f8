"""Entry point for running the moduli-space verification suites."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from src.errors import ChartError, GroupConstraintError, PatternError, SolveError, WordError
from src.suites.config import COMMANDS, DEFAULT_SEED, RunConfig, Tolerances
from src.suites.coordinator import VerificationCoordinator
from src.suites.report import build_report, write_report
from src.utils.metrics import summarize_checks

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_SOLVE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flat-moduli", description=__doc__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--pattern", default="torus1", help="stock pattern name or .pat file")
    parser.add_argument("--group", default="SU2", help="SU2, SL2R, T2, a stock description or a .json file")
    parser.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    parser.add_argument("--samples", type=int, default=20)
    parser.add_argument("--fd-step", type=float, default=1e-4)
    parser.add_argument("--tol", action="append", default=[], metavar="KEY=VAL")
    parser.add_argument("--out", type=Path, default=Path("results") / "report.json")
    parser.add_argument("--function", default="re_trace", help="class function for flows and brackets")
    parser.add_argument("--time", type=float, default=1.0, help="flow time")
    parser.add_argument("--steps", type=int, default=200, help="integrator steps")
    parser.add_argument("--intersections", default=None, help="intersection data file (defaults to the pattern's)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        pattern_path=args.pattern,
        group_name=args.group,
        seed=args.seed,
        n_samples=args.samples,
        fd_step=args.fd_step,
        tolerances=Tolerances().updated(args.tol),
        output_path=args.out,
        function_name=args.function,
        flow_time=args.time,
        flow_steps=args.steps,
        intersections_path=args.intersections,
    )


def run(config: RunConfig) -> int:
    try:
        coordinator = VerificationCoordinator(config)
    except (PatternError, WordError, ChartError, GroupConstraintError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = coordinator.run()
    except SolveError as exc:
        print(f"{config.command}: solve failure: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    except (PatternError, WordError, ChartError, GroupConstraintError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_report(config.output_path, build_report(config, result, coordinator.get_event_log()))
    summary = summarize_checks(result.checks)
    failed = summary.loc[~summary["passed"]].index.tolist() if not summary.empty else []
    print(f"{config.command}: {len(summary) - len(failed)}/{len(summary)} checks passed" + (f" (failed: {', '.join(failed)})" if failed else ""))
    print("Saved results into", config.output_path.parent)
    return EXIT_OK if result.passed else EXIT_TOLERANCE


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
