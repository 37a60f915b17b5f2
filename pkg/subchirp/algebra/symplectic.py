"""Binary symplectic group Sp(2m;2) in Bruhat-generator form

Symplectic vectors are written c = (a, b) with a in the first m coordinates.
Elements act on row vectors, c -> c^T F.
"""

from dataclasses import dataclass
from typing import Iterator

from subchirp.algebra.gf2core import (
    BinarySubspace,
    BitMat,
    BitVec,
    enumerate_grassmannian,
    grassmannian_rank,
    grassmannian_unrank,
    gaussian_binomial,
)
from subchirp.errors import DimensionError, DomainError


def omega(m: int) -> BitMat:
    """The 2m x 2m matrix of the symplectic form"""
    zero = BitMat.zeros(m, m)
    ident = BitMat.identity(m)
    return zero.hstack(ident).vstack(ident.hstack(zero))


def _blocks(upper_left: BitMat, upper_right: BitMat, lower_left: BitMat, lower_right: BitMat) -> BitMat:
    return upper_left.hstack(upper_right).vstack(lower_left.hstack(lower_right))


def _partial_identity(m: int, r: int) -> BitMat:
    """I_{m|r}: I_r in the upper-left corner"""
    return BitMat.identity(r).embed(m) if r else BitMat.zeros(m, m)


@dataclass(frozen=True)
class SymplecticElement:
    m: int
    matrix: BitMat

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (2 * self.m, 2 * self.m):
            raise DimensionError(f"Expected a {2 * self.m}x{2 * self.m} matrix")

    @classmethod
    def identity(cls, m: int) -> "SymplecticElement":
        return cls(m, BitMat.identity(2 * m))

    def __matmul__(self, other: "SymplecticElement") -> "SymplecticElement":
        return SymplecticElement(self.m, self.matrix @ other.matrix)

    def is_symplectic(self) -> bool:
        w = omega(self.m)
        return self.matrix @ w @ self.matrix.transpose() == w

    def inverse(self) -> "SymplecticElement":
        w = omega(self.m)
        return SymplecticElement(self.m, w @ self.matrix.transpose() @ w)

    def act(self, c: BitVec) -> BitVec:
        """Row action c^T F"""
        if c.length != 2 * self.m:
            raise DimensionError(f"Expected a vector of length {2 * self.m}")
        return self.matrix.transpose() @ c

    def render(self) -> str:
        return self.matrix.render()


@dataclass(frozen=True)
class CosetLabel:
    """(r, H, S_r) indexing one right coset of Sp(2m;2) modulo F_D F_U products"""

    r: int
    sub: BinarySubspace
    s_r: BitMat

    def __post_init__(self):
        if self.sub.r != self.r:
            raise DomainError(f"Subspace of rank {self.sub.r} under label of rank {self.r}")
        if (self.s_r.rows, self.s_r.cols) != (self.r, self.r) or not self.s_r.is_symmetric():
            raise DomainError("S_r must be a symmetric r x r matrix")

    @property
    def m(self) -> int:
        return self.sub.m

    def s_embedded(self) -> BitMat:
        """S~_r: S_r in the upper-left corner of an m x m zero matrix"""
        return self.s_r.embed(self.m)

    def s_bits(self) -> str:
        """Upper triangle of S_r, row-major"""
        return "".join(
            str(self.s_r.entry(i, j)) for i in range(self.r) for j in range(i, self.r)
        )


def f_d(p: BitMat) -> SymplecticElement:
    if not p.is_invertible():
        raise DomainError("F_D requires an invertible matrix")
    m = p.rows
    zero = BitMat.zeros(m, m)
    return SymplecticElement(m, _blocks(p, zero, zero, p.inverse().transpose()))


def f_u(s: BitMat) -> SymplecticElement:
    if not s.is_symmetric():
        raise DomainError("F_U requires a symmetric matrix")
    m = s.rows
    ident = BitMat.identity(m)
    return SymplecticElement(m, _blocks(ident, s, BitMat.zeros(m, m), ident))


def f_omega(m: int, r: int) -> SymplecticElement:
    if not 0 <= r <= m:
        raise DomainError(f"Rank {r} outside 0..{m}")
    on = _partial_identity(m, r)
    off = BitMat.identity(m) + on
    return SymplecticElement(m, _blocks(off, on, on, off))


def coset_rep(label: CosetLabel) -> SymplecticElement:
    """F_O(P_I, S_r) = F_D(P_I) F_U(S~_r) F_Omega(r)"""
    return f_d(label.sub.completion) @ f_u(label.s_embedded()) @ f_omega(label.m, label.r)


def clifford_image(label: CosetLabel) -> SymplecticElement:
    """F_Omega(r) F_U(S~_r) F_D(P_I^T), the row-action image of G_F for `label`"""
    return f_omega(label.m, label.r) @ f_u(label.s_embedded()) @ f_d(label.sub.completion.transpose())


def _symmetric_from_bits(r: int, mask: int) -> BitMat:
    slots = [(i, j) for i in range(r) for j in range(i, r)]
    entries = [[0] * r for _ in range(r)]
    for k, (i, j) in enumerate(slots):
        if (mask >> (len(slots) - 1 - k)) & 1:
            entries[i][j] = entries[j][i] = 1
    return BitMat.from_array(entries) if r else BitMat.zeros(0, 0)


def enumerate_symmetric(r: int) -> Iterator[BitMat]:
    """All r x r symmetric matrices, ordered by their upper triangle read as an integer"""
    for mask in range(2 ** (r * (r + 1) // 2)):
        yield _symmetric_from_bits(r, mask)


def enumerate_cosets(m: int, ranks=None) -> Iterator[CosetLabel]:
    """Every coset label (r, H, S_r) exactly once, ascending r first"""
    if m < 1:
        raise DomainError("m must be at least 1")
    for r in ranks if ranks is not None else range(m + 1):
        for sub in enumerate_grassmannian(m, r):
            for s_r in enumerate_symmetric(r):
                yield CosetLabel(r, sub, s_r)


def coset_count(m: int, ranks=None) -> int:
    return sum(
        gaussian_binomial(m, r) * 2 ** (r * (r + 1) // 2)
        for r in (ranks if ranks is not None else range(m + 1))
    )


def symplectic_inner(c1: BitVec, c2: BitVec) -> int:
    """<(a, b), (c, d)> = b^T c + a^T d mod 2"""
    if c1.length != c2.length or c1.length % 2:
        raise DimensionError("Symplectic vectors must share an even length")
    m = c1.length // 2
    a, b = c1.split(m)
    c, d = c2.split(m)
    return b.dot(c) ^ a.dot(d)


def _rank_block(m: int, r: int) -> int:
    return gaussian_binomial(m, r) * 2 ** (r * (r + 1) // 2)


def coset_unrank(m: int, index: int, ranks=None) -> CosetLabel:
    """The label at position `index` of enumerate_cosets(m, ranks)"""
    if index < 0:
        raise DomainError(f"Negative coset index {index}")
    for r in ranks if ranks is not None else range(m + 1):
        block = _rank_block(m, r)
        if index < block:
            sub_index, mask = divmod(index, 2 ** (r * (r + 1) // 2))
            return CosetLabel(r, grassmannian_unrank(m, r, sub_index), _symmetric_from_bits(r, mask))
        index -= block
    raise DomainError("Coset index beyond the number of labels")


def coset_rank(label: CosetLabel, ranks=None) -> int:
    """Position of `label` in enumerate_cosets(label.m, ranks)"""
    offset = 0
    for r in ranks if ranks is not None else range(label.m + 1):
        if r == label.r:
            mask = int(label.s_bits() or "0", 2)
            return offset + grassmannian_rank(label.sub) * 2 ** (r * (r + 1) // 2) + mask
        offset += _rank_block(label.m, r)
    raise DomainError(f"Rank {label.r} is not part of this enumeration")
