"""simulate: one random-access experiment point"""

import argparse

from pydantic import ValidationError

from subchirp.cli.common import EXIT_OK, open_output, svg_path
from subchirp.config import settings
from subchirp.errors import ConfigError
from subchirp.sim.report import render_svg, write_stats_csv
from subchirp.sim.runner import TrialConfig, run_trials


def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="CSV file, stdout when omitted")
    parser.add_argument("--format", choices=["csv", "svg"], default="csv")
    parser.add_argument("--threads", type=int, default=None, help="overrides BSSC_THREADS")
    parser.add_argument("--timing", action="store_true", default=None, help="fill mean_decode_us")


def write_outputs(args: argparse.Namespace, rows: list) -> None:
    if args.format == "svg" and not args.out:
        raise ConfigError("--format svg needs --out")
    timing = settings.REPORT_TIMING if args.timing is None else args.timing
    with open_output(args.out) as handle:
        write_stats_csv(rows, handle, timing=timing)
    if args.format == "svg":
        with open_output(svg_path(args.out)) as handle:
            handle.write(render_svg(rows))


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="run one experiment and write a stats row")
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--users", type=int, required=True)
    parser.add_argument("--trials", type=int, required=True)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--codebook", choices=["bssc", "bc", "random"], default="bssc")
    parser.add_argument("--decoder", choices=["structured", "exhaustive"], default="structured")
    parser.add_argument("--noise", type=float, default=0.0, help="noise variance per complex sample")
    add_output_flags(parser)
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    try:
        cfg = TrialConfig(
            m=args.m,
            L=args.users,
            trials=args.trials,
            seed=args.seed,
            codebook=args.codebook,
            decoder=args.decoder,
            noise_var=args.noise,
        )
    except ValidationError as e:
        raise ConfigError(str(e)) from e
    if args.threads is not None and args.threads < 1:
        raise ConfigError("--threads must be positive")
    stats = run_trials(cfg, threads=args.threads)
    write_outputs(args, [stats])
    return EXIT_OK
