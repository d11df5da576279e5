"""
horoball24 - Main Entry Point

Command-line front end for the horoball packings of the ideal 24-cell:
constants tables, density sweeps, optimization, verification and the
summary report.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel

from src.config.constants import APP_NAME, APP_VERSION, LOG_DIR
from src.config.settings import AppConfig
from src.containers.di_container import get_container, reset_container
from src.models.density import FamilyName
from src.models.run_config import Command, OutputFormat, RunConfig
from src.services.report_renderer import render
from src.services.report_service import ReportService
from src.utils.file_ops import write_text_atomic
from src.utils.logger import get_logger, setup_logging
from src.utils.validators import validate_family_name, validate_perturbation

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per report."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="packing family: b01, b12, b13 or b04")
    common.add_argument("--grid", type=int, help="grid points over the family domain")
    common.add_argument("--mc-samples", type=int, help="Monte Carlo samples per configuration")
    common.add_argument("--seed", type=int, help="Monte Carlo root seed")
    common.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        help="output format",
    )
    common.add_argument("--out", type=Path, help="write output to this file instead of stdout")
    common.add_argument("--workers", type=int, help="worker threads")
    common.add_argument("--config", type=Path, help="settings file (JSON)")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--log-file", type=Path, help="also log to a rotating file in this directory")
    common.add_argument(
        "--perturb-v0",
        type=float,
        help="multiply V0 in the closed forms by this factor (test mode)",
    )
    common.add_argument(
        "--skip-mc",
        action="store_true",
        help="skip the Monte Carlo checks; the audit is marked partial",
    )

    parser = argparse.ArgumentParser(
        prog=APP_NAME,
        description="Horoball packing densities of the ideal 24-cell",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {APP_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("constants", parents=[common], help="derived constants against source decimals")
    sub.add_parser("dump", parents=[common], help="vertices and neighbor classes of the 24-cell")
    sub.add_parser("sweep", parents=[common], help="density curve of one family")
    sub.add_parser("optimize", parents=[common], help="maximize one or all families")
    sub.add_parser("verify", parents=[common], help="run the verification suite")
    sub.add_parser("report", parents=[common], help="optima, regimes and the global optimum")
    return parser


def resolve_run_config(args: argparse.Namespace, config: AppConfig) -> RunConfig:
    """
    Merge settings and flags; flags win.

    Raises:
        ValidationError: If the merged values are invalid
        ValueError: If the family name or perturbation is invalid
    """
    if args.family is not None and not validate_family_name(args.family):
        raise ValueError(f"Unknown family '{args.family}'")
    if not validate_perturbation(args.perturb_v0):
        raise ValueError(f"Invalid V0 perturbation {args.perturb_v0}")

    def pick(value, fallback):
        return fallback if value is None else value

    return RunConfig(
        command=Command(args.command),
        family=FamilyName(args.family.strip().lower()) if args.family else None,
        grid=pick(args.grid, config.output.grid),
        mc_samples=pick(args.mc_samples, config.oracle.mc_samples),
        seed=pick(args.seed, config.oracle.seed),
        output_format=OutputFormat(pick(args.output_format, config.output.output_format)),
        output_path=args.out,
        workers=pick(args.workers, config.oracle.workers),
        perturb_v0=args.perturb_v0,
        skip_mc=args.skip_mc,
    )


def execute(run: RunConfig, service: ReportService) -> BaseModel:
    """
    Run one command.

    Raises:
        ValueError: If a required option is missing
    """
    if run.command is Command.CONSTANTS:
        return service.constants_table()
    if run.command is Command.DUMP:
        return service.cell_dump()
    if run.command is Command.SWEEP:
        if run.family is None:
            raise ValueError("sweep requires --family")
        return service.sweep(run.family, run.grid, run.workers)
    if run.command is Command.OPTIMIZE:
        return service.optimize(run.family, run.grid, run.workers)
    if run.command is Command.VERIFY:
        return service.verify(
            run.mc_samples,
            run.seed,
            perturb_v0=run.perturb_v0,
            skip_mc=run.skip_mc,
            workers=run.workers,
        )
    return service.packing_summary(run.grid, run.workers)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main application entry point.

    Args:
        argv: Arguments without the program name; sys.argv when None

    Returns:
        0 on success, 1 on a failed verification or output error, 2 on usage errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.config is not None and not args.config.is_file():
        print(f"{APP_NAME}: error: settings file {args.config} not found", file=sys.stderr)
        return EXIT_USAGE

    reset_container()
    container = get_container(args.config)
    config = container.config
    setup_logging(
        log_dir=args.log_file or LOG_DIR,
        log_level=args.log_level or config.advanced.log_level,
        log_to_file=args.log_file is not None or config.advanced.log_to_file,
        run=args.command,
    )

    try:
        run = resolve_run_config(args, config)
        result = execute(run, container.report_service)
        text = render(result, run.output_format, config.output.csv_digits)
    except ValueError as e:
        # pydantic, domain and rendering errors all derive from ValueError
        print(f"{APP_NAME}: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if run.output_path is not None:
        if not write_text_atomic(run.output_path, text):
            return EXIT_FAILURE
    else:
        sys.stdout.write(text)

    if run.command is Command.VERIFY and not result.passed:
        logger.error(f"Verification failed: {', '.join(result.failing)}")
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
