#!/usr/bin/env python3
"""
Vee Insight - Main Entry Point
Exact checks for vee-systems, Kohno connections, induced Frobenius
structures and their non-local Hamiltonian operators
"""
import argparse
import sys
from typing import List, Optional

from loguru import logger
from pydantic import ValidationError

from cli.commands import run_command
from core.exceptions import VeeInsightError
from utils.config import settings
from utils.logger import setup_logger
from utils.metrics import CHECK_DURATION, write_metrics
from utils.reporting import render

EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=["text", "json"],
        default=settings.report_format,
        help="Report format on stdout",
    )
    common.add_argument("--seed", type=int, default=settings.default_seed, help="Seed of the single random generator")
    common.add_argument("--tol", type=float, default=None, help="Tolerance for numeric residuals and integrand means")
    common.add_argument("--log-level", default=None, help="Log level (DEBUG, INFO, WARNING, ...)")
    common.add_argument("--metrics-file", default=None, help="Write Prometheus textfile metrics here")
    return common


def _source_options() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", help="Covector system JSON file")
    source.add_argument("--builtin", help="Builtin name (A<n>, B<n>, D<n>, G2, d21lambda, g12)")
    source.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=P/Q",
        help="Bind a parameter (repeatable)",
    )
    return source


def _regularization_options() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--path", help="Degenerate locus NAME=EXPR, approached as NAME = EXPR + eps")
    options.add_argument(
        "--at",
        action="append",
        default=[],
        metavar="NAME=P/Q",
        help="Limit value of the path parameter, or bindings when --path is given",
    )
    options.add_argument("--scale", default=None, help="Overall factor of the limit metric")
    return options


def _sampling_options() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--points", type=int, default=settings.sample_points, help="Random admissible points")
    return options


def _loop_options() -> argparse.ArgumentParser:
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--grid", type=int, default=settings.default_grid, help="Grid size (power of two)")
    options.add_argument("--loop", help="Fourier loop JSON file instead of random loops")
    options.add_argument("--loops", type=int, default=settings.loop_count, help="Number of random loops")
    return options


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        description="Vee Insight - vee-systems, Kohno property and non-local Hamiltonian operators",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Vee and Kohno verdicts of a root system
  python main.py check-equivalence --builtin B2 --format json

  # Regularized D(2,1,lambda) metric on the locus s = -t-1
  python main.py regularize --builtin d21lambda --path "s=-t-1" --at t=1

  # Principal hierarchy of the polynomial kdv2d structure
  python main.py hierarchy --builtin kdv2d --levels 5 --grid 64
        """,
    )
    common = _common_options()
    source = _source_options()
    regularization = _regularization_options()
    sampling = _sampling_options()
    loops = _loop_options()

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("validate", parents=[common, source], help="Validate a covector system")
    commands.add_parser("check-vee", parents=[common, source], help="Decide the vee-condition")
    commands.add_parser(
        "check-kohno", parents=[common, source, sampling], help="Kohno property and connection flatness"
    )
    commands.add_parser(
        "check-equivalence", parents=[common, source], help="Compare vee and Kohno verdicts plane by plane"
    )
    commands.add_parser("gram", parents=[common, source], help="Gram metric (symbolic for unbound families)")
    commands.add_parser(
        "build-frobenius",
        parents=[common, source, regularization, sampling],
        help="Exact Frobenius checks at random points",
    )
    commands.add_parser(
        "check-wdvv",
        parents=[common, source, regularization, sampling],
        help="Associativity oracle (also kdv2d, trivial1d)",
    )
    commands.add_parser(
        "regularize", parents=[common, source, regularization], help="Degenerate limit of a family"
    )
    commands.add_parser(
        "check-poisson-conditions",
        parents=[common, source, regularization, sampling],
        help="Exact bivector conditions for every affinor pair",
    )
    loop_test = commands.add_parser(
        "loop-test",
        parents=[common, source, regularization, loops],
        help="Operator forms and skew-symmetry on loops",
    )
    loop_test.add_argument("--pairs", type=int, default=10, help="Random (f, g) pairs per loop")
    hierarchy = commands.add_parser("hierarchy", parents=[common, loops], help="Principal hierarchy checks")
    hierarchy.add_argument("--builtin", default="kdv2d", help="Polynomial builtin (kdv2d, trivial1d)")
    hierarchy.add_argument("--levels", type=int, default=settings.hierarchy_levels, help="Highest level")
    commands.add_parser("list-builtin", parents=[common], help="List builtin systems")
    export = commands.add_parser("export-builtin", parents=[common], help="Covector JSON of a builtin")
    export.add_argument("name", help="Builtin name")

    args = parser.parse_args(argv)
    if args.command == "export-builtin":
        args.format = "json"
    return args


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit code"""
    args = parse_arguments(argv)
    setup_logger(level=args.log_level)

    try:
        with CHECK_DURATION.labels(command=args.command).time():
            report, code = run_command(args)
        print(render(report, args.format))
    except (VeeInsightError, ValidationError) as e:
        logger.error(f"{args.command}: {e}")
        code = EXIT_USAGE
    except Exception:
        logger.exception(f"Internal error in {args.command}")
        code = EXIT_INTERNAL

    metrics_file = args.metrics_file or settings.metrics_file
    if metrics_file:
        write_metrics(metrics_file)
    return code


if __name__ == "__main__":
    sys.exit(main())
