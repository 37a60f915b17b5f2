"""sweep: run a grid of experiments from a key = values file"""

import argparse

import logging

from subchirp.cli.common import EXIT_OK, read_text
from subchirp.cli.simulate import add_output_flags, write_outputs
from subchirp.errors import ConfigError
from subchirp.sim.grid import load_grid
from subchirp.sim.runner import sweep

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sweep", help="run every point of a grid file")
    parser.add_argument("--spec", required=True, help="grid file of key = v1, v2 lines")
    parser.add_argument("--no-progress", action="store_true")
    add_output_flags(parser)
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    if args.threads is not None and args.threads < 1:
        raise ConfigError("--threads must be positive")
    configs = load_grid(read_text(args.spec))
    rows = sweep(configs, threads=args.threads, progress=not args.no_progress)
    done = [row.stats for row in rows if row.stats is not None]
    if not done:
        raise ConfigError("Every sweep row failed")
    if len(done) < len(rows):
        logger.warning(f"{len(rows) - len(done)} of {len(rows)} sweep rows failed and are omitted")
    write_outputs(args, done)
    return EXIT_OK
