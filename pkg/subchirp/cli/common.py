"""Helpers shared by the subcommands"""

import sys
from contextlib import contextmanager
from typing import IO, Iterator, Optional

import logging

from subchirp.codes.export import atomic_writer
from subchirp.errors import InputError, OutputError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_CONFIG = 2
EXIT_DECODE = 3
EXIT_INPUT = 4
EXIT_OUTPUT = 5


@contextmanager
def open_output(path: Optional[str]) -> Iterator[IO[str]]:
    """stdout when `path` is empty, otherwise an atomically replaced file"""
    if not path:
        yield sys.stdout
        return
    try:
        with atomic_writer(path) as handle:
            yield handle
    except OSError as e:
        raise OutputError(f"Cannot write {path}: {e}") from e
    logger.info(f"Wrote {path}")


def read_text(path: str) -> str:
    try:
        with open(path, "r") as handle:
            return handle.read()
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e


def svg_path(path: str) -> str:
    stem = path[:-4] if path.lower().endswith(".csv") else path
    return stem + ".svg"
