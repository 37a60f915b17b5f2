"""encode: print the samples of one codeword"""

import argparse

from subchirp.cli.common import EXIT_OK, open_output
from subchirp.codes.bssc import KINDS, Codebook


def format_sample(value: float) -> str:
    return f"{value + 0.0:.17g}"


def register(subparsers) -> None:
    parser = subparsers.add_parser("encode", help="print codeword samples as index,re,im")
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--id", type=int, required=True, dest="index")
    parser.add_argument("--kind", choices=KINDS, default="bssc")
    parser.add_argument("--out")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    vector = Codebook(args.m, args.kind).vector(args.index)
    with open_output(args.out) as handle:
        for k, value in enumerate(vector):
            handle.write(f"{k},{format_sample(value.real)},{format_sample(value.imag)}\n")
    return EXIT_OK
