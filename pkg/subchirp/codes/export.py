"""CSV export of codebooks and atomic file output"""

import csv
import os
import tempfile
from contextlib import contextmanager
from typing import IO, Iterator

import logging

from subchirp.codes.bssc import Codebook, synthesize

logger = logging.getLogger(__name__)

CODEBOOK_HEADER = ["id", "m", "r", "leading", "h_free", "s_r", "b", "support", "phases"]


@contextmanager
def atomic_writer(path: str) -> Iterator[IO[str]]:
    """Text handle whose content replaces `path` only when the block succeeds"""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            yield handle
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise


def codebook_rows(codebook: Codebook) -> Iterator[list]:
    for index, p in enumerate(codebook):
        word = synthesize(p)
        info = p.describe()
        yield [
            index,
            info["m"],
            info["r"],
            info["leading"],
            info["h_free"],
            info["s_r"],
            info["b"],
            " ".join(str(a) for a in word.support),
            "".join(str(e) for e in word.entry_exponents()),
        ]


def write_codebook_csv(codebook: Codebook, handle: IO[str]) -> int:
    """Write one row per codeword in id order; returns the row count"""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CODEBOOK_HEADER)
    count = 0
    for row in codebook_rows(codebook):
        writer.writerow(row)
        count += 1
    logger.info(f"Exported {count} {codebook.kind} codewords for m={codebook.m}")
    return count
