"""Heisenberg-Weyl operators, Walsh-Hadamard transforms and stabilizer groups

A Pauli element is stored as i^k D(a, b) with D(a, b) the tensor product of
sigma_x^{a_j} sigma_z^{b_j}. Operators are never materialized: every action
is an index permutation combined with a sign/phase pattern, O(N).
"""

from dataclasses import dataclass
from typing import List, Union

import logging
import numpy as np

from subchirp.algebra.gf2core import BitMat, BitVec, parity, popcount
from subchirp.algebra.symplectic import CosetLabel, symplectic_inner
from subchirp.errors import DimensionError

logger = logging.getLogger(__name__)

PHASES = np.array([1, 1j, -1, -1j], dtype=complex)

Bits = Union[BitVec, int]


def signal_order(length: int) -> int:
    """m such that length == 2^m"""
    if length < 1 or length & (length - 1):
        raise DimensionError(f"Length {length} is not a power of two")
    return length.bit_length() - 1


def _broadcast(pattern: np.ndarray, x: np.ndarray) -> np.ndarray:
    return pattern.reshape(pattern.shape + (1,) * (x.ndim - 1))


@dataclass(frozen=True)
class PauliElement:
    a: BitVec
    b: BitVec
    k: int = 0

    def __post_init__(self):
        if self.a.length != self.b.length:
            raise DimensionError("X and Z parts must have the same length")
        if self.k not in (0, 1, 2, 3):
            object.__setattr__(self, "k", self.k % 4)

    @classmethod
    def d(cls, a: BitVec, b: BitVec) -> "PauliElement":
        return cls(a, b, 0)

    @classmethod
    def e(cls, a: BitVec, b: BitVec) -> "PauliElement":
        """E(a, b) = i^{a^T b} D(a, b), the exponent read over the integers"""
        return cls(a, b, bin(a.bits & b.bits).count("1") % 4)

    @property
    def m(self) -> int:
        return self.a.length

    @property
    def vector(self) -> BitVec:
        return self.a.concat(self.b)

    def is_diagonal(self) -> bool:
        return self.a.bits == 0

    def is_identity(self) -> bool:
        return self.a.bits == 0 and self.b.bits == 0 and self.k == 0

    def to_dense(self) -> np.ndarray:
        return apply(self, np.eye(2 ** self.m, dtype=complex))


def mult_d(p1: PauliElement, p2: PauliElement) -> PauliElement:
    """Product with D(a,b) D(c,d) = (-1)^{b^T c} D(a+c, b+d)"""
    if p1.m != p2.m:
        raise DimensionError("Pauli elements act on different dimensions")
    k = p1.k + p2.k + 2 * p1.b.dot(p2.a)
    return PauliElement(p1.a + p2.a, p1.b + p2.b, k % 4)


def commutes(p1: PauliElement, p2: PauliElement) -> bool:
    return symplectic_inner(p1.vector, p2.vector) == 0


def apply(p: PauliElement, x: np.ndarray) -> np.ndarray:
    """(i^k D(a,b) x)(w) = i^k (-1)^{(w+a)^T b} x(w+a) along the first axis"""
    x = np.asarray(x)
    n = 2 ** p.m
    if x.shape[0] != n:
        raise DimensionError(f"Expected {n} samples, got {x.shape[0]}")
    src = np.arange(n, dtype=np.int64) ^ p.a.bits
    sign = 1 - 2 * parity(src & p.b.bits)
    return PHASES[p.k] * _broadcast(sign, x) * x[src]


def wht(x: np.ndarray, inplace: bool = False) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the first axis

    y(u) = sum_v (-1)^{u^T v} x(v); applying it twice multiplies by N.
    """
    x = np.asarray(x)
    n = x.shape[0]
    signal_order(n)
    y = np.array(x, copy=True, order="C")
    h = 1
    while h < n:
        view = y.reshape((n // (2 * h), 2, h) + y.shape[1:])
        upper = view[:, 0].copy()
        view[:, 0] += view[:, 1]
        view[:, 1] = upper - view[:, 1]
        h *= 2
    if inplace:
        x[...] = y
        return x
    return y


def pauli_spectrum(s: np.ndarray, a: Bits) -> np.ndarray:
    """y -> s^dagger E(a, y) s for every y, with one pointwise product and one WHT

    A two-dimensional `s` gives the spectrum of every column.
    """
    s = np.asarray(s, dtype=complex)
    n = s.shape[0]
    m = signal_order(n)
    shift = int(a)
    if shift >> m:
        raise DimensionError(f"Shift {shift} outside F2^{m}")
    idx = np.arange(n, dtype=np.int64)
    spectrum = wht(np.conj(s[idx ^ shift]) * s)
    return spectrum * _broadcast(PHASES[popcount(idx & shift) % 4], spectrum)


@dataclass(frozen=True)
class StabilizerGroup:
    """Group {E(x^T A, x^T B)} generated by the rows of [A | B]"""

    m: int
    gen_a: BitMat
    gen_b: BitMat

    @property
    def size(self) -> int:
        return 2 ** self.gen_a.rows

    def generators(self) -> List[PauliElement]:
        return [
            PauliElement.e(self.gen_a.row(i), self.gen_b.row(i))
            for i in range(self.gen_a.rows)
        ]

    def elements(self) -> List[PauliElement]:
        a_t = self.gen_a.transpose()
        b_t = self.gen_b.transpose()
        n = self.gen_a.rows
        return [
            PauliElement.e(a_t @ BitVec(n, x), b_t @ BitVec(n, x))
            for x in range(2 ** n)
        ]

    def is_full_rank(self) -> bool:
        return self.gen_a.hstack(self.gen_b).rank() == self.gen_a.rows

    def is_commuting(self) -> bool:
        gens = self.generators()
        return all(commutes(p, q) for i, p in enumerate(gens) for q in gens[i + 1:])

    def contains_minus_identity(self) -> bool:
        """Whether products of the generators, phases tracked, ever reach -I

        A product reaches -I either directly or through an element whose
        square is -I.
        """
        gens = self.generators()
        identity = PauliElement(BitVec.zeros(self.m), BitVec.zeros(self.m))
        for x in range(2 ** len(gens)):
            product = identity
            for i, gen in enumerate(gens):
                if (x >> (len(gens) - 1 - i)) & 1:
                    product = mult_d(product, gen)
            if product.a.bits == 0 and product.b.bits == 0 and product.k != 0:
                return True
            if not mult_d(product, product).is_identity():
                return True
        return False

    def diagonal_elements(self) -> List[PauliElement]:
        return [p for p in self.elements() if p.is_diagonal()]

    def off_diagonal_patterns(self) -> List[int]:
        """Distinct X parts x^T A over the group"""
        return sorted({p.a.bits for p in self.elements()})

    def eigenvalues(self, w: np.ndarray) -> np.ndarray:
        """w^dagger E w / w^dagger w for every element, in element order"""
        w = np.asarray(w, dtype=complex)
        norm = np.vdot(w, w)
        return np.array([np.vdot(w, apply(p, w)) / norm for p in self.elements()])


def stabilizer_of_bssc(label: CosetLabel) -> StabilizerGroup:
    """Maximal stabilizer with rows [H_I^T | S_r I_I^T] and [0 | H~_I^T]"""
    sub = label.sub
    m, r = label.m, label.r
    gen_a = sub.basis.transpose().vstack(BitMat.zeros(m - r, m))
    gen_b = (label.s_r @ sub.selector().transpose()).vstack(sub.dual_basis.transpose())
    return StabilizerGroup(m, gen_a, gen_b)
