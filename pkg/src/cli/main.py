"""Command-line entry point: ``analytic``, ``simulate``, ``sweep`` and ``hybrid-experiment``."""

import argparse
import sys
from typing import List, Optional

from src import __version__
from src.cli.commands import cmd_analytic, cmd_hybrid_experiment, cmd_simulate, cmd_sweep
from src.utils.config import config
from src.utils.errors import ConfigError, NpcaError, UsageError
from src.utils.logging import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_RUNTIME = 4

DEFAULT_RUN_CONFIG = "config/table3.json"


def _run_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    parent.add_argument("--config", default=DEFAULT_RUN_CONFIG,
                        help="flat JSON run configuration (default: %(default)s)")
    parent.add_argument("--seed", type=int, default=None, help="override the configured seed")
    parent.add_argument("--out", default=None,
                        help="output directory (default: $NPCA_OUT_DIR or settings output.directory)")
    return parent


def _batch_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    parent.add_argument("--l", type=float, nargs="+", default=None, help="overhead factor(s) l >= 1")
    parent.add_argument("--replications", type=int, default=None, help="seeds per point")
    parent.add_argument("--workers", type=int, default=1, help="parallel simulation processes")
    parent.add_argument("--period", type=float, default=None, help="occupancy period in seconds")
    parent.add_argument("--n-periods", type=int, default=None, help="number of occupancy periods")
    parent.add_argument("--thre1", type=float, default=None, help="hybrid occupancy threshold")
    parent.add_argument("--k1", type=int, default=None, help="hybrid estimation window in slots")
    parent.add_argument("--idle-only", action="store_true",
                        help="draw every period from the idle occupancy class")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="npca",
        allow_abbrev=False,
        description="NPCA throughput: closed-form model, slot-level simulator and experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="logging level (default: settings logging.level)")
    parser.add_argument("--log-file", default=None, help="also log to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    analytic = sub.add_parser("analytic", allow_abbrev=False,
                              help="closed-form throughput factors and ratio")
    analytic.add_argument("--p1", type=float, default=None, help="primary-channel occupancy in [0, 1)")
    analytic.add_argument("--p2", type=float, default=None, help="non-primary occupancy in [0, 1]")
    analytic.add_argument("--l", type=float, nargs="+", default=None, help="overhead factor(s) l >= 1")
    analytic.add_argument("--sweep", choices=["a", "b", "c"], default=None,
                          help="evaluate a whole scenario grid instead of one point")
    analytic.add_argument("--grid-step", type=float, default=None, help="grid increment for --sweep")
    analytic.add_argument("--out", default=None, help="write analytic.csv and a manifest here")
    analytic.set_defaults(func=cmd_analytic)

    simulate = sub.add_parser("simulate", parents=[_run_options()], allow_abbrev=False,
                              help="one simulation run")
    simulate.add_argument("--policy", choices=["legacy", "npca", "hybrid"], default=None)
    simulate.add_argument("--sim-time", type=float, default=None, help="simulated seconds")
    simulate.add_argument("--p1", type=float, default=None, help="primary-channel OBSS occupancy")
    simulate.add_argument("--p2", type=float, default=None, help="non-primary OBSS occupancy")
    simulate.add_argument("--l", type=float, default=None, help="overhead factor")
    simulate.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", parents=[_run_options(), _batch_options()], allow_abbrev=False,
                           help="scenario sweeps and the validation grid")
    sweep.add_argument("--scenario", required=True,
                       choices=["a", "b", "c", "validation", "random-occupancy"])
    sweep.add_argument("--grid-step", type=float, default=None, help="p1 grid increment")
    sweep.add_argument("--sim-time", type=float, default=None, help="simulated seconds per run")
    sweep.set_defaults(func=cmd_sweep)

    hybrid = sub.add_parser("hybrid-experiment", parents=[_run_options(), _batch_options()],
                            allow_abbrev=False,
                            help="legacy vs NPCA vs hybrid under random occupancy")
    hybrid.set_defaults(func=cmd_hybrid_experiment)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.log_level or config.get("logging.level", "INFO"),
                  args.log_file or config.get("logging.file"))

    try:
        return args.func(args)
    except UsageError as e:
        print(f"{parser.prog} {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as e:
        where = f" (key: {e.key})" if e.key else ""
        logger.error(f"Configuration error{where}: {e}")
        return EXIT_CONFIG
    except (NpcaError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
