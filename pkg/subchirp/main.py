"""Command-line entry point"""

import sys
from typing import List, Optional

import logging

from subchirp.cli import build_parser
from subchirp.cli.common import EXIT_CONFIG, EXIT_DECODE, EXIT_INPUT, EXIT_OUTPUT
from subchirp.config import settings
from subchirp.errors import (
    ConfigError,
    DecodeError,
    DimensionError,
    DomainError,
    InputError,
    OutputError,
    ResourceError,
    SubchirpError,
)

logger = logging.getLogger(__name__)

EXIT_CODES = [
    (DecodeError, EXIT_DECODE),
    (InputError, EXIT_INPUT),
    (OutputError, EXIT_OUTPUT),
    ((ConfigError, DomainError, DimensionError, ResourceError), EXIT_CONFIG),
]


def main(argv: Optional[List[str]] = None) -> int:
    """Parse `argv`, run one subcommand and return its exit code"""
    parser = build_parser()
    args = parser.parse_args(argv)
    level = "DEBUG" if args.verbose or settings.DEBUG else settings.LOG_LEVEL
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)

    try:
        return args.func(args)
    except SubchirpError as e:
        for kinds, code in EXIT_CODES:
            if isinstance(e, kinds):
                logger.error(f"{args.command}: {e}")
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
