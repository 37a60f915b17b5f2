"""codebook: export every codeword as CSV"""

import argparse

from subchirp.cli.common import EXIT_OK, open_output
from subchirp.codes.bssc import KINDS, Codebook
from subchirp.codes.export import write_codebook_csv


def register(subparsers) -> None:
    parser = subparsers.add_parser("codebook", help="export a codebook as CSV")
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--kind", choices=KINDS, default="bssc")
    parser.add_argument("--out", help="output file, stdout when omitted")
    parser.set_defaults(func=run)


def run(args: argparse.Namespace) -> int:
    codebook = Codebook(args.m, args.kind)
    with open_output(args.out) as handle:
        write_codebook_csv(codebook, handle)
    return EXIT_OK
