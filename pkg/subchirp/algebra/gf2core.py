"""Bit-packed linear algebra over F2

Vectors and matrix columns are packed into Python integers. Coordinate 0 of
a length-m vector is the most significant bit of its integer image, so the
integer image of v is sum(v_i * 2^(m-1-i)). This matches the tensor ordering
e_v = e_{v_1} (x) ... (x) e_{v_m} used to index complex vectors of length 2^m.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import logging
import numpy as np

from subchirp.errors import DimensionError, DomainError

logger = logging.getLogger(__name__)

MAX_M = 16
MAX_LENGTH = 2 * MAX_M  # symplectic vectors carry (a, b)


def popcount(values: np.ndarray) -> np.ndarray:
    """Number of set bits of every entry of an integer array"""
    values = np.asarray(values, dtype=np.int64)
    count = np.zeros_like(values)
    for shift in range(MAX_LENGTH):
        count += (values >> shift) & 1
    return count


def parity(values: np.ndarray) -> np.ndarray:
    """Parity of the set bits of every entry of an integer array"""
    values = np.asarray(values, dtype=np.int64)
    for shift in (16, 8, 4, 2, 1):
        values = values ^ (values >> shift)
    return values & 1


def index_bits(values: np.ndarray, width: int) -> np.ndarray:
    """Unpack integers into rows of bits, most significant coordinate first"""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return (values[..., None] >> shifts) & 1


def gaussian_binomial(m: int, r: int) -> int:
    """Number of r-dimensional subspaces of F2^m"""
    if r < 0 or r > m:
        return 0
    numerator = 1
    denominator = 1
    for i in range(r):
        numerator *= 2 ** (m - i) - 1
        denominator *= 2 ** (i + 1) - 1
    return numerator // denominator


@dataclass(frozen=True)
class BitVec:
    """Binary vector of fixed length packed into one integer"""

    length: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.length <= MAX_LENGTH:
            raise DimensionError(f"Unsupported vector length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"Value {self.bits} does not fit in {self.length} bits")

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "BitVec":
        bits = 0
        for value in values:
            bits = (bits << 1) | (int(value) & 1)
        return cls(len(values), bits)

    @classmethod
    def from_string(cls, text: str) -> "BitVec":
        return cls.from_list([int(ch) for ch in text.strip()])

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "BitVec":
        return cls(length, 1 << (length - 1 - index))

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(index)
        return (self.bits >> (self.length - 1 - index)) & 1

    def __int__(self) -> int:
        return self.bits

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.bits ^ other.bits)

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return bin(self.bits & other.bits).count("1") & 1

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def concat(self, other: "BitVec") -> "BitVec":
        return BitVec(self.length + other.length, (self.bits << other.length) | other.bits)

    def split(self, head: int) -> Tuple["BitVec", "BitVec"]:
        """Split into the first `head` coordinates and the rest"""
        tail = self.length - head
        return BitVec(head, self.bits >> tail), BitVec(tail, self.bits & ((1 << tail) - 1))

    def to_list(self) -> List[int]:
        return [self[i] for i in range(self.length)]

    def __str__(self) -> str:
        return "".join(str(bit) for bit in self.to_list())

    def _check(self, other: "BitVec"):
        if self.length != other.length:
            raise DimensionError(f"Length mismatch: {self.length} vs {other.length}")


@dataclass(frozen=True)
class BitMat:
    """Binary matrix stored column-major, one packed integer per column"""

    rows: int
    cols: int
    columns: Tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.rows <= MAX_LENGTH or self.cols < 0:
            raise DimensionError(f"Unsupported shape {self.rows}x{self.cols}")
        if len(self.columns) != self.cols:
            raise DimensionError(f"Expected {self.cols} columns, got {len(self.columns)}")
        for col in self.columns:
            if col < 0 or col >> self.rows:
                raise DimensionError(f"Column {col} does not fit in {self.rows} rows")

    # Construction

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMat":
        return cls(rows, cols, (0,) * cols)

    @classmethod
    def identity(cls, n: int) -> "BitMat":
        return cls(n, n, tuple(1 << (n - 1 - j) for j in range(n)))

    @classmethod
    def from_columns(cls, rows: int, columns: Iterable) -> "BitMat":
        packed = tuple(int(col) for col in columns)
        return cls(rows, len(packed), packed)

    @classmethod
    def from_rows(cls, cols: int, rows: Sequence) -> "BitMat":
        return cls.from_columns(cols, [int(row) for row in rows]).transpose()

    @classmethod
    def from_array(cls, array) -> "BitMat":
        array = np.asarray(array, dtype=np.int64) & 1
        if array.ndim != 2:
            raise DimensionError("Expected a two-dimensional array")
        rows, cols = array.shape
        columns = []
        for j in range(cols):
            col = 0
            for i in range(rows):
                col = (col << 1) | int(array[i, j])
            columns.append(col)
        return cls(rows, cols, tuple(columns))

    @classmethod
    def selector(cls, m: int, positions: Sequence[int]) -> "BitMat":
        """Columns of the m x m identity indexed by `positions`"""
        return cls(m, len(positions), tuple(1 << (m - 1 - p) for p in positions))

    # Access

    def entry(self, i: int, j: int) -> int:
        return (self.columns[j] >> (self.rows - 1 - i)) & 1

    def column(self, j: int) -> BitVec:
        return BitVec(self.rows, self.columns[j])

    def row(self, i: int) -> BitVec:
        bits = 0
        for col in self.columns:
            bits = (bits << 1) | ((col >> (self.rows - 1 - i)) & 1)
        return BitVec(self.cols, bits)

    def to_array(self) -> np.ndarray:
        return np.array(
            [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)],
            dtype=np.int64,
        ).reshape(self.rows, self.cols)

    def render(self) -> str:
        """Rows of '0'/'1' characters, one per line"""
        return "\n".join(str(self.row(i)) for i in range(self.rows))

    # Arithmetic

    def transpose(self) -> "BitMat":
        return BitMat(self.cols, self.rows, tuple(self.row(i).bits for i in range(self.rows)))

    @property
    def T(self) -> "BitMat":
        return self.transpose()

    def __add__(self, other: "BitMat") -> "BitMat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("Shape mismatch in addition")
        return BitMat(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.columns, other.columns)))

    def _combine(self, bits: int) -> int:
        out = 0
        for j, col in enumerate(self.columns):
            if (bits >> (self.cols - 1 - j)) & 1:
                out ^= col
        return out

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            if other.length != self.cols:
                raise DimensionError(f"Cannot apply {self.rows}x{self.cols} matrix to length {other.length}")
            return BitVec(self.rows, self._combine(other.bits))
        if other.rows != self.cols:
            raise DimensionError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return BitMat(self.rows, other.cols, tuple(self._combine(col) for col in other.columns))

    def apply_to_indices(self, values: np.ndarray) -> np.ndarray:
        """Integer images of M v for every packed vector v in `values`"""
        values = np.asarray(values, dtype=np.int64)
        out = np.zeros_like(values)
        for j, col in enumerate(self.columns):
            out ^= ((values >> (self.cols - 1 - j)) & 1) * col
        return out

    def hstack(self, other: "BitMat") -> "BitMat":
        if self.rows != other.rows:
            raise DimensionError("Row mismatch in horizontal stacking")
        return BitMat(self.rows, self.cols + other.cols, self.columns + other.columns)

    def vstack(self, other: "BitMat") -> "BitMat":
        if self.cols != other.cols:
            raise DimensionError("Column mismatch in vertical stacking")
        columns = tuple((a << other.rows) | b for a, b in zip(self.columns, other.columns))
        return BitMat(self.rows + other.rows, self.cols, columns)

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> "BitMat":
        """Submatrix picked by row and column index lists"""
        return BitMat.from_array(self.to_array()[np.ix_(list(rows), list(cols))].reshape(len(rows), len(cols)))

    def embed(self, size: int) -> "BitMat":
        """Place this square matrix in the upper-left corner of a size x size zero matrix"""
        shift = size - self.rows
        columns = [col << shift for col in self.columns] + [0] * (size - self.cols)
        return BitMat(size, size, tuple(columns))

    # Properties

    def rank(self) -> int:
        return len(_reduce(self.columns))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self.transpose() == self

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "BitMat":
        """Gauss-Jordan inverse over F2"""
        if self.rows != self.cols:
            raise DomainError("Only square matrices can be inverted")
        n = self.rows
        # rows of [M | I] as 2n-bit integers
        work = [(self.row(i).bits << n) | (1 << (n - 1 - i)) for i in range(n)]
        for col in range(n):
            bit = 1 << (2 * n - 1 - col)
            pivot = next((i for i in range(col, n) if work[i] & bit), None)
            if pivot is None:
                raise DomainError("Matrix is singular over F2")
            work[col], work[pivot] = work[pivot], work[col]
            for i in range(n):
                if i != col and work[i] & bit:
                    work[i] ^= work[col]
        mask = (1 << n) - 1
        return BitMat.from_rows(n, [row & mask for row in work])


def _reduce(vectors: Iterable[int]) -> Dict[int, int]:
    """Fully reduced basis keyed by leading bit position"""
    pivots: Dict[int, int] = {}
    for vec in vectors:
        for lead, basis in pivots.items():
            if (vec >> lead) & 1:
                vec ^= basis
        if not vec:
            continue
        lead = vec.bit_length() - 1
        for other in list(pivots):
            if (pivots[other] >> lead) & 1:
                pivots[other] ^= vec
        pivots[lead] = vec
    return pivots


@dataclass(frozen=True)
class BinarySubspace:
    """An r-dimensional subspace H of F2^m in column reduced echelon form

    `leading` holds the 0-based leading rows I; `basis` is H_I, `dual_basis`
    is the canonical dual basis, `completion` is P_I = [H_I | I_~I] and
    `completion_inv_t` is its transposed inverse [I_I | dual_basis].
    """

    m: int
    r: int
    leading: Tuple[int, ...]
    basis: BitMat
    dual_basis: BitMat
    completion: BitMat
    completion_inv_t: BitMat

    @classmethod
    def from_echelon(cls, m: int, leading: Sequence[int], columns: Sequence[int]) -> "BinarySubspace":
        leading = tuple(leading)
        complement = tuple(t for t in range(m) if t not in leading)
        basis = BitMat(m, len(leading), tuple(columns))
        dual_columns = []
        for t in complement:
            col = 1 << (m - 1 - t)
            for j, i in enumerate(leading):
                if basis.entry(t, j):
                    col |= 1 << (m - 1 - i)
            dual_columns.append(col)
        dual_basis = BitMat(m, len(complement), tuple(dual_columns))
        return cls(
            m=m,
            r=len(leading),
            leading=leading,
            basis=basis,
            dual_basis=dual_basis,
            completion=basis.hstack(BitMat.selector(m, complement)),
            completion_inv_t=BitMat.selector(m, leading).hstack(dual_basis),
        )

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(t for t in range(self.m) if t not in self.leading)

    @property
    def leading_mask(self) -> int:
        mask = 0
        for i in self.leading:
            mask |= 1 << (self.m - 1 - i)
        return mask

    def selector(self) -> BitMat:
        """I_I"""
        return BitMat.selector(self.m, self.leading)

    def complement_selector(self) -> BitMat:
        """I_~I"""
        return BitMat.selector(self.m, self.complement)

    def free_slots(self) -> List[Tuple[int, int]]:
        """(row, column) positions of the free echelon entries, column-major"""
        return _free_slots(self.m, self.leading)

    def free_bits(self) -> str:
        return "".join(str(self.basis.entry(t, j)) for t, j in self.free_slots())

    def coset_indices(self, offset: int = 0) -> np.ndarray:
        """offset + H_I x for x = 0 .. 2^r - 1, as integer indices ordered by x"""
        xs = np.arange(2 ** self.r, dtype=np.int64)
        return self.basis.apply_to_indices(xs) ^ offset

    def elements(self) -> List[int]:
        return sorted(int(v) for v in self.coset_indices())

    def contains(self, vec: BitVec) -> bool:
        residue = vec.bits
        for j, i in enumerate(self.leading):
            if (residue >> (self.m - 1 - i)) & 1:
                residue ^= self.basis.columns[j]
        return residue == 0

    def render(self) -> str:
        return self.basis.render()


def rcef(generators: Sequence[BitVec], length: Optional[int] = None) -> BinarySubspace:
    """Span of `generators` in column reduced echelon form"""
    if length is None:
        if not generators:
            raise DimensionError("Length is required for an empty generator list")
        length = generators[0].length
    for gen in generators:
        if gen.length != length:
            raise DimensionError(f"Generator of length {gen.length} in F2^{length}")
    if length > MAX_M:
        raise DimensionError(f"m={length} exceeds the supported maximum {MAX_M}")
    pivots = _reduce(gen.bits for gen in generators)
    leads = sorted(pivots, reverse=True)
    leading = [length - 1 - lead for lead in leads]
    return BinarySubspace.from_echelon(length, leading, [pivots[lead] for lead in leads])


def span(columns: BitMat) -> BinarySubspace:
    return rcef([columns.column(j) for j in range(columns.cols)], columns.rows)


def dual(sub: BinarySubspace) -> BinarySubspace:
    """The (m - r)-dimensional subspace orthogonal to `sub`"""
    return span(sub.dual_basis)


def solve_affine(matrix: BitMat, rhs: BitVec) -> List[BitVec]:
    """All solutions x of matrix @ x = rhs

    Solutions are listed as the coset x0 + H_I t for t = 0 .. 2^k - 1, where
    H_I is the echelon basis of the kernel and x0 is the coset element that
    vanishes on the kernel's leading rows. An inconsistent system returns [].
    """
    if rhs.length != matrix.rows:
        raise DimensionError(f"Right-hand side of length {rhs.length} for {matrix.rows} equations")
    m = matrix.cols
    # each equation: coefficient bits followed by the rhs bit
    pivots = _reduce((matrix.row(i).bits << 1) | rhs[i] for i in range(matrix.rows))
    if 0 in pivots:
        logger.debug("Inconsistent affine system")
        return []
    pivot_cols: Dict[int, int] = {}
    particular = 0
    for lead, row in pivots.items():
        col = m - lead  # lead counts from the appended rhs bit
        pivot_cols[col] = row
        if row & 1:
            particular |= 1 << (m - 1 - col)
    kernel_vectors = []
    for free in range(m):
        if free in pivot_cols:
            continue
        vec = 1 << (m - 1 - free)
        for col, row in pivot_cols.items():
            if (row >> (m - free)) & 1:
                vec |= 1 << (m - 1 - col)
        kernel_vectors.append(BitVec(m, vec))
    kernel = rcef(kernel_vectors, m)
    shift = 0
    for j, i in enumerate(kernel.leading):
        if (particular >> (m - 1 - i)) & 1:
            shift ^= kernel.basis.columns[j]
    return [BitVec(m, int(v)) for v in kernel.coset_indices(particular ^ shift)]


def enumerate_grassmannian(m: int, r: int) -> Iterator[BinarySubspace]:
    """Every r-dimensional subspace of F2^m exactly once

    Order is lexicographic in the leading set, then in the free echelon
    entries read column-major as a binary number.
    """
    if r < 0 or r > m:
        raise DomainError(f"No {r}-dimensional subspaces of F2^{m}")
    if m > MAX_M:
        raise DimensionError(f"m={m} exceeds the supported maximum {MAX_M}")
    for leading in combinations(range(m), r):
        for mask in range(2 ** len(_free_slots(m, leading))):
            yield _subspace_from_mask(m, leading, mask)


def _free_slots(m: int, leading: Sequence[int]) -> List[Tuple[int, int]]:
    return [
        (t, j)
        for j, i in enumerate(leading)
        for t in range(i + 1, m)
        if t not in leading
    ]


def _subspace_from_mask(m: int, leading: Sequence[int], mask: int) -> BinarySubspace:
    slots = _free_slots(m, leading)
    columns = [1 << (m - 1 - i) for i in leading]
    for k, (t, j) in enumerate(slots):
        if (mask >> (len(slots) - 1 - k)) & 1:
            columns[j] |= 1 << (m - 1 - t)
    return BinarySubspace.from_echelon(m, leading, columns)


def grassmannian_unrank(m: int, r: int, index: int) -> BinarySubspace:
    """The subspace at position `index` of enumerate_grassmannian(m, r)"""
    if not 0 <= index < gaussian_binomial(m, r):
        raise DomainError(f"Subspace index {index} out of range for G({m},{r};2)")
    for leading in combinations(range(m), r):
        block = 2 ** len(_free_slots(m, leading))
        if index < block:
            return _subspace_from_mask(m, leading, index)
        index -= block
    raise DomainError("unreachable subspace index")


def grassmannian_rank(sub: BinarySubspace) -> int:
    """Position of `sub` in enumerate_grassmannian(sub.m, sub.r)"""
    offset = 0
    for leading in combinations(range(sub.m), sub.r):
        if leading == sub.leading:
            return offset + int(sub.free_bits() or "0", 2)
        offset += 2 ** len(_free_slots(sub.m, leading))
    raise DomainError("Subspace is not in echelon form")


def quadratic_form_mod4(sym: BitMat, xs: np.ndarray) -> np.ndarray:
    """x^T S x mod 4 with x read as an integer vector, for each packed x in `xs`"""
    r = sym.rows
    xs = np.asarray(xs, dtype=np.int64)
    if r == 0:
        return np.zeros_like(xs)
    bits = index_bits(xs, r)
    return np.einsum("...i,ij,...j->...", bits, sym.to_array(), bits) % 4
