"""Command-line interface"""

import argparse

from subchirp import __description__, __version__
from subchirp.cli import codebook, decode, encode, selftest, simulate, sweep

COMMANDS = [codebook, encode, decode, simulate, sweep, selftest]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subchirp", description=__description__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser
