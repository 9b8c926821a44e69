"""
ncinequality command-line interface.

Usage:
    ncinequality derive --n-cycle 5
    ncinequality derive --scenario my_scenario.json --format csv --out vertices.csv
    ncinequality evaluate --n-cycle 5 --kcbs --visibility 0.95
    ncinequality sweep --n-cycle 5 --kcbs --from 0.8 --to 1.0 --steps 21

Exit codes: 0 success, 1 input or parse error, 2 not a statistical proof.
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .commands import DeriveCommand, EvaluateCommand, SweepCommand
from .commands.base import CommandResult
from .config import ConfigurationManager
from .exceptions import NCIError, NotAStatisticalProofError
from .logger import get_logger

COMMANDS = {
    "derive": DeriveCommand,
    "evaluate": EvaluateCommand,
    "sweep": SweepCommand,
}


@dataclass(frozen=True)
class RunConfig:
    """Parsed command line."""

    command: str
    n_cycle: Optional[int] = None
    scenario_path: Optional[str] = None
    kcbs: bool = False
    realization_path: Optional[str] = None
    visibility: Optional[float] = None
    v_from: float = 0.0
    v_to: float = 1.0
    steps: int = 11
    output_format: Optional[str] = None
    output_path: Optional[str] = None
    config_path: Optional[str] = None
    threads: Optional[int] = None


def _add_scenario_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--n-cycle", type=int, metavar="N", help="Built-in n-cycle scenario")
    source.add_argument("--scenario", metavar="PATH", help="Scenario JSON file")


def _add_realization_options(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--kcbs",
        action="store_true",
        help="Built-in KCBS qutrit realization (n = number of measurements)",
    )
    source.add_argument("--realization", metavar="PATH", help="Realization JSON file")


def _add_output_options(parser: argparse.ArgumentParser, formats: list[str]) -> None:
    parser.add_argument(
        "--format", choices=formats, default=None, help=f"Output format (default: {formats[0]})"
    )
    parser.add_argument("--out", metavar="PATH", help="Output file (default: standard output)")
    parser.add_argument("--config", metavar="PATH", help="Settings JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncinequality",
        description="Derive and test noise-robust noncontextuality inequalities",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # --- derive ---
    derive_parser = subparsers.add_parser(
        "derive", help="Enumerate the polytope and derive the inequality parameters"
    )
    _add_scenario_options(derive_parser)
    _add_output_options(derive_parser, ["json", "csv", "table"])

    # --- evaluate ---
    evaluate_parser = subparsers.add_parser(
        "evaluate", help="Evaluate a quantum realization against the inequality"
    )
    _add_scenario_options(evaluate_parser)
    _add_realization_options(evaluate_parser)
    evaluate_parser.add_argument(
        "--visibility", type=float, metavar="V", help="Depolarizing visibility in [0, 1]"
    )
    _add_output_options(evaluate_parser, ["json", "csv", "table"])

    # --- sweep ---
    sweep_parser = subparsers.add_parser(
        "sweep", help="Sweep depolarizing visibility and locate the critical visibility"
    )
    _add_scenario_options(sweep_parser)
    _add_realization_options(sweep_parser)
    sweep_parser.add_argument(
        "--from", dest="v_from", type=float, default=0.0, help="Lowest visibility (default: 0)"
    )
    sweep_parser.add_argument(
        "--to", dest="v_to", type=float, default=1.0, help="Highest visibility (default: 1)"
    )
    sweep_parser.add_argument(
        "--steps", type=int, default=11, help="Number of grid points, at least 2 (default: 11)"
    )
    sweep_parser.add_argument(
        "-t", "--threads", type=int, default=None, help="Worker threads for the grid"
    )
    _add_output_options(sweep_parser, ["csv", "json", "table"])

    return parser


def parse_run_config(argv: Optional[list[str]] = None) -> RunConfig:
    """Parse arguments into a RunConfig (argparse exits on usage errors)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # Exit code 2 is reserved for "not a statistical proof".
        if e.code == 2:
            raise SystemExit(1) from None
        raise
    if args.command is None:
        parser.print_help(sys.stderr)
        raise SystemExit(1)
    return RunConfig(
        command=args.command,
        n_cycle=args.n_cycle,
        scenario_path=args.scenario,
        kcbs=getattr(args, "kcbs", False),
        realization_path=getattr(args, "realization", None),
        visibility=getattr(args, "visibility", None),
        v_from=getattr(args, "v_from", 0.0),
        v_to=getattr(args, "v_to", 1.0),
        steps=getattr(args, "steps", 11),
        output_format=args.format,
        output_path=args.out,
        config_path=args.config,
        threads=getattr(args, "threads", None),
    )


def _emit(result: CommandResult, output_path: Optional[str]) -> None:
    if output_path:
        Path(output_path).write_text(result.output, encoding="utf-8")
    else:
        sys.stdout.write(result.output)
    if result.message:
        print(result.message, file=sys.stderr)


def run(config: RunConfig) -> int:
    """Execute one parsed command and return its exit code."""
    logger = get_logger()
    settings = ConfigurationManager().load(config.config_path)
    operation = f"ncinequality {config.command}"
    logger.log_operation_start(
        operation=operation,
        n_cycle=config.n_cycle,
        scenario=config.scenario_path,
        output_format=config.output_format,
    )
    command = COMMANDS[config.command](settings)

    try:
        result = command.execute(config)
        _emit(result, config.output_path)
        logger.log_operation_end(
            operation=operation, success=result.exit_code == 0, exit_code=result.exit_code
        )
        return result.exit_code
    except NotAStatisticalProofError as e:
        logger.log_error(operation=operation, error=e)
        print(command.handle_error(e, "Not a statistical proof"), file=sys.stderr)
        return 2
    except (NCIError, ValueError, OSError) as e:
        logger.log_error(operation=operation, error=e)
        print(command.handle_error(e), file=sys.stderr)
        return 1


def main(argv: Optional[list[str]] = None) -> int:
    """Console entry point."""
    return run(parse_run_config(argv))


if __name__ == "__main__":
    sys.exit(main())
