"""Binary subspace chirp codewords and codebooks

A codeword is indexed by a coset label (r, H, S_r) and b in F2^m. Its
support is the coset {I_~I b_{m-r} + H_I x : x in F2^r} and its value at
x is (-1)^{wt(b_{m-r})} 2^{-r/2} i^{x^T S_r x + 2 b_r^T x}. Codewords are
kept exactly as Z4 exponents; floats only appear in `to_vector`.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Tuple

import logging
import numpy as np

from subchirp.algebra.clifford import apply, dense, g_f, z_mr
from subchirp.algebra.gf2core import BitMat, BitVec, parity, quadratic_form_mod4
from subchirp.algebra.pauli import PHASES
from subchirp.algebra.symplectic import (
    CosetLabel,
    coset_count,
    coset_rank,
    coset_unrank,
    enumerate_cosets,
)
from subchirp.config import settings
from subchirp.errors import DimensionError, DomainError, ResourceError

logger = logging.getLogger(__name__)

KINDS = ("bssc", "bc")


@dataclass(frozen=True)
class BsscParams:
    label: CosetLabel
    b: BitVec

    def __post_init__(self):
        if self.b.length != self.label.m:
            raise DimensionError(f"b has length {self.b.length}, expected {self.label.m}")

    @property
    def m(self) -> int:
        return self.label.m

    @property
    def r(self) -> int:
        return self.label.r

    @property
    def b_r(self) -> BitVec:
        return self.b.split(self.r)[0]

    @property
    def b_mr(self) -> BitVec:
        return self.b.split(self.r)[1]

    def describe(self) -> dict:
        """Plain-data view used by the JSON and CSV writers"""
        sub = self.label.sub
        return {
            "m": self.m,
            "r": self.r,
            "leading": format(sub.leading_mask, f"0{self.m}b"),
            "h_free": sub.free_bits(),
            "s_r": self.label.s_bits(),
            "b": str(self.b),
        }


@dataclass(frozen=True)
class Codeword:
    """Exact codeword: support indices sorted ascending, exponents aligned

    `local` holds the F2^r coordinate x of every support entry and
    `exponents` the phase x^T S_r x + 2 b_r^T x mod 4 before the global sign.
    """

    m: int
    r: int
    support: Tuple[int, ...]
    local: Tuple[int, ...]
    exponents: Tuple[int, ...]
    sign: int

    @property
    def amplitude(self) -> float:
        return 2.0 ** (-self.r / 2)

    def entry_exponents(self) -> np.ndarray:
        """Exponents with the global sign folded in as +2"""
        fold = 0 if self.sign > 0 else 2
        return (np.asarray(self.exponents, dtype=np.int64) + fold) % 4

    def to_vector(self) -> np.ndarray:
        out = np.zeros(2 ** self.m, dtype=complex)
        out[list(self.support)] = self.amplitude * PHASES[self.entry_exponents()]
        return out

    def restricted(self) -> np.ndarray:
        """The 2^r nonzero entries reindexed by x: a binary chirp in 2^r dimensions"""
        out = np.zeros(2 ** self.r, dtype=complex)
        out[list(self.local)] = self.amplitude * PHASES[self.entry_exponents()]
        return out


def _chirp_exponents(s_r: BitMat, b_r: BitVec, xs: np.ndarray) -> np.ndarray:
    """x^T S_r x + 2 b_r^T x mod 4"""
    return (quadratic_form_mod4(s_r, xs) + 2 * parity(xs & b_r.bits)) % 4


def synthesize(p: BsscParams) -> Codeword:
    sub = p.label.sub
    offset = (sub.complement_selector() @ p.b_mr).bits
    xs = np.arange(2 ** p.r, dtype=np.int64)
    support = sub.coset_indices(offset)
    exponents = _chirp_exponents(p.label.s_r, p.b_r, xs)
    order = np.argsort(support, kind="stable")
    return Codeword(
        m=p.m,
        r=p.r,
        support=tuple(int(a) for a in support[order]),
        local=tuple(int(x) for x in xs[order]),
        exponents=tuple(int(e) for e in exponents[order]),
        sign=-1 if p.b_mr.weight() % 2 else 1,
    )


def synthesize_via_clifford(p: BsscParams) -> np.ndarray:
    """Column b of G_F Z(m, r), applied factor by factor to e_b"""
    unit = np.zeros(2 ** p.m, dtype=complex)
    unit[p.b.bits] = 1.0
    return apply(g_f(p.label) @ z_mr(p.m, p.r), unit)


def label_block(label: CosetLabel) -> np.ndarray:
    """All 2^m codewords of `label` as the columns of one dense matrix"""
    return dense(g_f(label) @ z_mr(label.m, label.r))


def enumerate_params(m: int, ranks: Optional[Sequence[int]] = None) -> Iterator[BsscParams]:
    """Coset order first, then b as an integer"""
    for label in enumerate_cosets(m, ranks):
        for b in range(2 ** m):
            yield BsscParams(label, BitVec(m, b))


def codebook_size(m: int) -> int:
    return 2 ** m * coset_count(m)


def bc_size(m: int) -> int:
    return 2 ** (m * (m + 3) // 2)


class Codebook:
    """Indexable BSSC or BC codebook

    Codeword ids are coset_index * 2^m + int(b), so both directions of the
    id codec cost one subspace (un)ranking and never list the codebook.
    """

    def __init__(self, m: int, kind: str = "bssc"):
        if m < 1:
            raise DomainError("m must be at least 1")
        if kind not in KINDS:
            raise DomainError(f"Unknown codebook kind '{kind}'")
        self.m = m
        self.kind = kind
        self.ranks = (m,) if kind == "bc" else tuple(range(m + 1))
        self.size = 2 ** m * coset_count(m, self.ranks)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[BsscParams]:
        return enumerate_params(self.m, self.ranks)

    def params(self, index: int) -> BsscParams:
        if not 0 <= index < self.size:
            raise DomainError(f"Codeword id {index} outside [0, {self.size})")
        label = coset_unrank(self.m, index >> self.m, self.ranks)
        return BsscParams(label, BitVec(self.m, index & (2 ** self.m - 1)))

    def index(self, p: BsscParams) -> int:
        if p.m != self.m:
            raise DimensionError(f"Parameters for m={p.m} in a codebook for m={self.m}")
        return (coset_rank(p.label, self.ranks) << self.m) | p.b.bits

    def vector(self, index: int) -> np.ndarray:
        return synthesize(self.params(index)).to_vector()

    def matrix(self) -> np.ndarray:
        """Every codeword as one row of a (size, 2^m) array"""
        if self.size > settings.MAX_EXHAUSTIVE_CODEWORDS:
            raise ResourceError(
                f"{self.kind} codebook at m={self.m} has {self.size} codewords, "
                f"limit is {settings.MAX_EXHAUSTIVE_CODEWORDS}"
            )
        logger.info(f"Materializing {self.kind} codebook, m={self.m}, {self.size} codewords")
        return np.stack([synthesize(p).to_vector() for p in self])


@dataclass(frozen=True)
class ExactInner:
    """(re + i im) / 2^{r_sum / 2} with integer re, im"""

    re: int
    im: int
    r_sum: int

    def magnitude_squared(self) -> Fraction:
        return Fraction(self.re ** 2 + self.im ** 2, 2 ** self.r_sum)

    def __complex__(self) -> complex:
        return complex(self.re, self.im) * 2.0 ** (-self.r_sum / 2)


def inner(c1: Codeword, c2: Codeword) -> ExactInner:
    """<c1, c2> = sum conj(c1) c2 over the support intersection, exactly"""
    if c1.m != c2.m:
        raise DimensionError("Codewords of different lengths")
    _, i1, i2 = np.intersect1d(c1.support, c2.support, assume_unique=True, return_indices=True)
    diff = (c2.entry_exponents()[i2] - c1.entry_exponents()[i1]) % 4
    counts = np.bincount(diff, minlength=4)
    return ExactInner(
        re=int(counts[0] - counts[2]),
        im=int(counts[1] - counts[3]),
        r_sum=c1.r + c2.r,
    )


def max_coherence(codewords: Sequence[Codeword]) -> Fraction:
    """max |<c, c'>|^2 over distinct pairs, from one integer Gram matrix"""
    if len(codewords) < 2:
        raise DomainError("Coherence needs at least two codewords")
    m = codewords[0].m
    units = np.zeros((len(codewords), 2 ** m), dtype=complex)
    ranks = np.empty(len(codewords), dtype=np.int64)
    for k, c in enumerate(codewords):
        units[k, list(c.support)] = PHASES[c.entry_exponents()]
        ranks[k] = c.r
    gram = units.conj() @ units.T
    numerators = np.rint(np.abs(gram) ** 2).astype(np.int64)
    # common denominator 2^{2m}
    scaled = numerators << (2 * m - ranks[:, None] - ranks[None, :])
    np.fill_diagonal(scaled, -1)
    return Fraction(int(scaled.max()), 2 ** (2 * m))
