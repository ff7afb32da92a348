"""
rsdr command line
`rsdr fit | cv | simulate | outliers | roc` with long flags; a flat
key = value config file supplies defaults that flags override.
"""

import argparse
import logging
import sys

from pydantic import ValidationError

from . import __version__
from .config import COMMANDS, RunConfig, settings
from .errors import InputError
from .request_handler import EXIT_INPUT, run
from .utils import Parsers

logger = logging.getLogger(__name__)

LOG_FORMAT = "[rsdr] %(levelname)s %(name)s: %(message)s"


def build_parser():
    """Argument parser; every flag defaults to None so unset flags are detectable"""
    parser = argparse.ArgumentParser(
        prog="rsdr",
        description="Robust sufficient dimension reduction via alpha-distance covariance",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--version", action="version", version="rsdr %s" % __version__)
    parser.add_argument("--config", help="key = value file; flags override its entries")

    data = parser.add_argument_group("data")
    data.add_argument("--input", help="CSV with a header row")
    data.add_argument("--response", help="response column name or index (default: last)")
    data.add_argument("--standardize", action="store_true", default=None)

    est = parser.add_argument_group("estimation")
    est.add_argument("--dim", type=int, help="target dimension d")
    est.add_argument("--alpha", help="exponent in (0, 2) or 'cv'; comma list for cv/simulate")
    est.add_argument("--eta", type=float)
    est.add_argument("--tol", type=float, help="objective tolerance")
    est.add_argument("--max-iter", type=int)
    est.add_argument("--folds", type=int, help="cross-validation folds (default 5)")

    out = parser.add_argument_group("outliers")
    out.add_argument("--gamma", type=float, help="upper quantile level (default 0.05)")
    out.add_argument("--boot", type=int, help="bootstrap replicates (default 100)")
    out.add_argument("--reducer", choices=("none", "pca", "rsdr"))
    out.add_argument("--outliers", type=int, help="planted outliers in the ROC study (default 10)")

    sim = parser.add_argument_group("simulation")
    sim.add_argument("--model", choices=("A", "B", "C"))
    sim.add_argument("--dist", choices=("gaussian", "uniform"))
    sim.add_argument("--n", type=int)
    sim.add_argument("--p", type=int)
    sim.add_argument("--contaminate", action="store_true", default=None)
    sim.add_argument("--reps", type=int)

    run_group = parser.add_argument_group("run")
    run_group.add_argument("--seed", type=int)
    run_group.add_argument("--threads", type=int, help="workers (default $RSDR_THREADS or 1)")
    run_group.add_argument("--output", help="JSON result document (default: stdout)")
    run_group.add_argument("--table", help="CSV table (simulate) or ROC points (roc)")
    run_group.add_argument("--log-level", help="default $RSDR_LOG_LEVEL or INFO")
    return parser


def merge_config(args):
    """
    Combine config-file entries and flags into a RunConfig.

    Raises:
        InputError: unreadable config file
        ValidationError: unknown keys or out-of-range values
    """
    values = {}
    if args.config:
        values.update(Parsers.parse_config_file(args.config))
    flags = {k: v for k, v in vars(args).items() if v is not None and k != "config"}
    values.update(flags)
    return RunConfig(**values)


def setup_logging(level):
    """Diagnostics go to stderr"""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger("rsdr")
    root.handlers[:] = [handler]
    try:
        root.setLevel(level.upper())
    except ValueError:
        root.setLevel(logging.INFO)
        logger.warning("Unknown log level %r, using INFO", level)


def main(argv=None):
    """Main entry point"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or settings.log_level)
    try:
        config = merge_config(args)
    except (InputError, ValidationError) as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_INPUT
    if config.log_level != (args.log_level or settings.log_level):
        setup_logging(config.log_level)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
