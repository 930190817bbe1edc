"""
Filename: main.py
Project: TD Clock Stability (TDCS)
Description: Main entry point for the td-clock-stability command line
Author: arnabadhikari93@gmail.com
Date Created: 2026-10-19
Last Modified: 2026-10-19
Version: 1.0.0

Copyright (c) 2024-2026 Arnab Adhikari. All rights reserved.
"""

import argparse
import logging
import sys
from typing import List
from typing import Optional

from td_clock_stability.cli.commands import run_command
from td_clock_stability.logger.logger import configure_logging
from td_clock_stability.schemas.run_schemas import CommandName
from td_clock_stability.schemas.run_schemas import Figure
from td_clock_stability.schemas.td_schemas import Clock
from td_clock_stability.services.dependencies import get_settings
from td_clock_stability.utils.run_context import run_scope

EPILOG = """
Examples:
  # Exact stability region of the m=23 counterexample, cross-checked at 200 sampled eta
  td-clock-stability stability-region --family example1 --m 23 --verify-samples 200

  # Maximal stability threshold of an instance file
  td-clock-stability eta-star --instance chain.txt

  # Figure data: eigenvalue trajectory, 10^7-step runs of both clocks, nine more seeds
  td-clock-stability reproduce fig1
  td-clock-stability reproduce fig2 --steps 10000000
  td-clock-stability reproduce appendixB --workers 4

  # Re-run a command from the header of one of its result files
  td-clock-stability simulate --from-result output/simulate_example1-m23_seed0_global.csv
"""


def _source_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("instance source")
    group.add_argument("--instance", help="Instance file (matrices, family descriptor or experiment MDP)")
    group.add_argument("--family", choices=["example1"], help="Counterexample family (default: example1)")
    group.add_argument("--m", type=int, help="Family size parameter, m > 22 (default: 23)")


def _common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", help="Output file name (or file prefix for simulate), relative to the output directory")
    parser.add_argument("--from-result", help="Re-run with the configuration embedded in a result CSV header")


def _simulation_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("simulation")
    group.add_argument("--eta", type=float, help="Differential TD eta (default: 2 alpha for the family, 2 otherwise)")
    group.add_argument("--eta-ratio", type=float, help="eta in units of alpha")
    group.add_argument("--gamma", type=float, help="Run discounted TD with this discount instead")
    group.add_argument("--kappa", type=float, help="Behavior probability of the target action (default: min(kappa_max, 0.5))")
    group.add_argument("--c", type=float, help="Learning rate numerator (default: 0.45)")
    group.add_argument("--n0", type=float, help="Learning rate offset (default: 1e4)")
    group.add_argument("--beta", type=float, help="Learning rate exponent in (0.5, 1] (default: 0.6)")
    group.add_argument("--steps", type=int, help="Steps per run (default: 10^7)")
    group.add_argument("--seeds", type=int, nargs="+", help="Seeds (default: 0)")
    group.add_argument("--clocks", nargs="+", choices=[clock.value for clock in Clock], help="Clocks to run (default: both)")
    group.add_argument("--checkpoint-ratio", type=float, help="Geometric spacing of recorded checkpoints (default: 1.2)")
    group.add_argument("--workers", type=int, help="Worker processes for the seed fan-out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="td-clock-stability",
        description="Stability regions of differential TD under a global learning-rate clock, the counterexample family and TD simulations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    parser.add_argument("--log-level", help="Logging level (default: from settings, INFO)")
    parser.add_argument("--log-format", choices=["console", "json"], help="Log record format (default: from settings, console)")
    parser.add_argument("--log-dir", help="Also write info.log and error.log to this directory")
    parser.add_argument("--output-dir", help="Directory for result files (default: TDCS_OUTPUT_DIR or ./output)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    region = subparsers.add_parser(CommandName.STABILITY_REGION.value, help="Exact stability region as open eta intervals")
    _source_arguments(region)
    region.add_argument("--eta-cap", type=float, help="Upper end of the eta search range")
    region.add_argument("--verify-samples", type=int, help="Cross-check the region against eigenvalues at this many sampled eta")
    region.add_argument("--seeds", type=int, nargs=1, help="Seed of the verification samples")
    _common_arguments(region)

    star = subparsers.add_parser(CommandName.ETA_STAR.value, help="Maximal stability threshold eta* and its witnesses")
    _source_arguments(star)
    star.add_argument("--omega-max", type=float, help="Upper end of the frequency search")
    star.add_argument("--grid", type=int, help="Frequency grid points (default: 4000)")
    _common_arguments(star)

    trajectory = subparsers.add_parser(CommandName.EIGEN_TRAJECTORY.value, help="Eigenvalues of A_eta / alpha along t = eta / alpha")
    _source_arguments(trajectory)
    trajectory.add_argument("--t-min", type=float, help="First t (default: 0.05)")
    trajectory.add_argument("--t-max", type=float, help="Last t (default: 4)")
    trajectory.add_argument("--points", type=int, help="Grid points (default: 200)")
    _common_arguments(trajectory)

    simulate = subparsers.add_parser(CommandName.SIMULATE.value, help="Tabular TD runs, one CSV per (seed, clock)")
    _source_arguments(simulate)
    _simulation_arguments(simulate)
    simulate.add_argument("--expected-update", action="store_true", help="Run the deterministic expected-update recursion instead")
    _common_arguments(simulate)

    reproduce = subparsers.add_parser(CommandName.REPRODUCE.value, help="Figure data and gnuplot stubs")
    reproduce.add_argument("figure", choices=[figure.value for figure in Figure])
    _source_arguments(reproduce)
    _simulation_arguments(reproduce)

    instance = subparsers.add_parser(CommandName.INSTANCE.value, help="Write an instance file")
    _source_arguments(instance)
    instance.add_argument("--mdp", action="store_true", help="Write the two-action experiment MDP built on the instance")
    instance.add_argument("--materialize", action="store_true", help="Write a family as d_mu and P_pi matrices")
    instance.add_argument("--kappa", type=float, help="Behavior probability of the target action for --mdp")
    _common_arguments(instance)

    lemma = subparsers.add_parser(CommandName.LEMMA_CHECK.value, help="Spectrum checks on L = D_mu (I - P_pi)")
    _source_arguments(lemma)
    _common_arguments(lemma)

    derivative = subparsers.add_parser(CommandName.DERIVATIVE.value, help="Closed-form and finite-difference lambda'(0)")
    _source_arguments(derivative)
    derivative.add_argument("--epsilon", type=float, help="Finite-difference step (default: 1e-6)")
    _common_arguments(derivative)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    configure_logging(
        logger_name=__name__,
        application_name=settings.SERVICE_ACRONYM.upper(),
        level=(args.log_level or settings.LOG_LEVEL).upper(),
        log_format=args.log_format or settings.LOG_OUTPUT_FORMAT,
        log_dir=args.log_dir or settings.LOG_DIR,
        debug_out=settings.LOG_DEBUG_OUT,
    )
    # to reduce logging noise from the JIT compiler
    logging.getLogger("numba").setLevel(logging.WARNING)

    with run_scope():
        return run_command(args, settings)


if __name__ == "__main__":
    sys.exit(main())
