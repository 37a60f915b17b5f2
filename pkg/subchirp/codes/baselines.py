"""Baseline codebooks: binary chirps and random Gaussian lines"""

from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import logging
import numpy as np

from subchirp.codes.bssc import Codebook, codebook_size
from subchirp.config import settings
from subchirp.errors import DomainError, ResourceError

logger = logging.getLogger(__name__)

# spawn_key prefix of the codebook streams; trial streams use one-element keys
CODEBOOK_STREAM = 2 ** 32


def bc_codebook(m: int) -> np.ndarray:
    """Rows are the binary chirps, the r = m slice of the BSSC codebook"""
    return Codebook(m, "bc").matrix()


class RandomCodebook:
    """Seeded unit-norm circular Gaussian codebook, generated block by block

    Block c holds rows [c * chunk_rows, (c + 1) * chunk_rows) and is drawn
    from its own Philox stream keyed by (seed, c). Any row can be rebuilt
    without the others, so scanning the codebook needs one block of memory.
    """

    def __init__(
        self,
        m: int,
        size: Optional[int] = None,
        seed: int = settings.DEFAULT_SEED,
        chunk_rows: Optional[int] = None,
    ):
        if m < 1:
            raise DomainError("m must be at least 1")
        self.m = m
        self.n = 2 ** m
        self.size = codebook_size(m) if size is None else int(size)
        if self.size < 1:
            raise DomainError("Random codebook needs at least one codeword")
        self.seed = seed
        self.chunk_rows = chunk_rows or max(1, settings.RANDOM_CHUNK_SAMPLES // self.n)
        if self.chunk_rows < 1:
            raise DomainError("Blocks need at least one row")

    def __repr__(self) -> str:
        return f"RandomCodebook(m={self.m}, size={self.size}, seed={self.seed})"

    @property
    def chunk_count(self) -> int:
        return -(-self.size // self.chunk_rows)

    def chunk(self, c: int) -> np.ndarray:
        start = c * self.chunk_rows
        if not 0 <= start < self.size:
            raise DomainError(f"Block {c} outside the codebook")
        rows = min(self.chunk_rows, self.size - start)
        stream = np.random.SeedSequence(self.seed, spawn_key=(CODEBOOK_STREAM, c))
        rng = np.random.Generator(np.random.Philox(stream))
        block = rng.standard_normal((rows, self.n)) + 1j * rng.standard_normal((rows, self.n))
        block /= np.linalg.norm(block, axis=1, keepdims=True)
        return block

    def chunks(self) -> Iterator[Tuple[int, np.ndarray]]:
        """(first row id, block) in id order"""
        for c in range(self.chunk_count):
            yield c * self.chunk_rows, self.chunk(c)

    def vectors(self, ids: Sequence[int]) -> np.ndarray:
        """Rows `ids`, regenerating only the blocks they fall in"""
        out = np.empty((len(ids), self.n), dtype=complex)
        by_chunk: Dict[int, List[int]] = {}
        for k, index in enumerate(ids):
            if not 0 <= index < self.size:
                raise DomainError(f"Codeword id {index} outside [0, {self.size})")
            by_chunk.setdefault(index // self.chunk_rows, []).append(k)
        for c, positions in by_chunk.items():
            block = self.chunk(c)
            out[positions] = block[[ids[k] - c * self.chunk_rows for k in positions]]
        return out

    def matrix(self) -> np.ndarray:
        if self.size > settings.MAX_EXHAUSTIVE_CODEWORDS:
            raise ResourceError(f"Random codebook of {self.size} codewords exceeds {settings.MAX_EXHAUSTIVE_CODEWORDS}")
        return np.concatenate([block for _, block in self.chunks()])


def random_codebook(m: int, size: Optional[int] = None, seed: int = settings.DEFAULT_SEED) -> np.ndarray:
    """
    Unit-norm circular Gaussian rows

    Args:
        m: Signals have length 2^m
        size: Number of codewords, the BSSC codebook size when omitted
        seed: Generator seed; equal seeds give identical codebooks

    Returns:
        Complex array of shape (size, 2^m)
    """
    codebook = RandomCodebook(m, size, seed)
    logger.debug(f"Materializing {codebook}")
    return codebook.matrix()
