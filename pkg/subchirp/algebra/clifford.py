"""Structured Clifford operators and the symplectic image map

Operators are kept as ordered factor lists and applied right-to-left.
Dense matrices only exist as test oracles for small m.

The symplectic image follows the row convention c -> c^T F_G with
G E(c) G^dagger = +-E(c^T F_G). Under this convention the map reverses
products: phi(G1 G2) = phi(G2) phi(G1). With it, phi(G_D(P)) = F_D(P),
phi(G_U(S)) = F_U(S) and phi(G_Omega(r)) = F_Omega(r).
"""

from dataclasses import dataclass
from typing import Tuple

import logging
import numpy as np

from subchirp.algebra.gf2core import BitMat, BitVec, parity, quadratic_form_mod4
from subchirp.algebra.pauli import PHASES, PauliElement, wht
from subchirp.algebra.symplectic import CosetLabel, SymplecticElement
from subchirp.config import settings
from subchirp.errors import CliffordConsistencyError, DimensionError, DomainError, ResourceError

logger = logging.getLogger(__name__)


def _broadcast(pattern: np.ndarray, x: np.ndarray) -> np.ndarray:
    return pattern.reshape(pattern.shape + (1,) * (x.ndim - 1))


@dataclass(frozen=True)
class Permutation:
    """G_D(P): e_v -> e_{P^T v}"""

    p: BitMat

    def apply(self, x: np.ndarray, m: int) -> np.ndarray:
        dest = self.p.transpose().apply_to_indices(np.arange(2 ** m, dtype=np.int64))
        out = np.empty_like(x)
        out[dest] = x
        return out

    def adjoint(self) -> "Permutation":
        return Permutation(self.p.inverse())


@dataclass(frozen=True)
class DiagQuartic:
    """G_U(S) = diag(i^{v^T S v mod 4}), conjugated when `conjugate` is set"""

    s: BitMat
    conjugate: bool = False

    def apply(self, x: np.ndarray, m: int) -> np.ndarray:
        exponents = quadratic_form_mod4(self.s, np.arange(2 ** m, dtype=np.int64))
        if self.conjugate:
            exponents = (-exponents) % 4
        return _broadcast(PHASES[exponents], x) * x

    def adjoint(self) -> "DiagQuartic":
        return DiagQuartic(self.s, not self.conjugate)


@dataclass(frozen=True)
class PartialHadamard:
    """G_Omega(r) = H_2^{(x) r} (x) I_{2^{m-r}}"""

    r: int

    def apply(self, x: np.ndarray, m: int) -> np.ndarray:
        if self.r == 0:
            return x.copy()
        blocks = x.reshape((2 ** self.r, 2 ** (m - self.r)) + x.shape[1:])
        return (wht(blocks) / np.sqrt(2.0 ** self.r)).reshape(x.shape)

    def adjoint(self) -> "PartialHadamard":
        return self


@dataclass(frozen=True)
class ZPattern:
    """Z(m, r) = I_{2^r} (x) sigma_z^{(x) m-r}"""

    r: int

    def apply(self, x: np.ndarray, m: int) -> np.ndarray:
        low = (1 << (m - self.r)) - 1
        sign = 1 - 2 * parity(np.arange(2 ** m, dtype=np.int64) & low)
        return _broadcast(sign, x) * x

    def adjoint(self) -> "ZPattern":
        return self


@dataclass(frozen=True)
class CliffordOp:
    m: int
    factors: Tuple = ()

    def __matmul__(self, other: "CliffordOp") -> "CliffordOp":
        if other.m != self.m:
            raise DimensionError("Operators act on different dimensions")
        return CliffordOp(self.m, self.factors + other.factors)

    def adjoint(self) -> "CliffordOp":
        return CliffordOp(self.m, tuple(f.adjoint() for f in reversed(self.factors)))


def apply(op: CliffordOp, x: np.ndarray) -> np.ndarray:
    """Apply the factors right-to-left along the first axis of `x`"""
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != 2 ** op.m:
        raise DimensionError(f"Expected {2 ** op.m} samples, got {x.shape[0]}")
    for factor in reversed(op.factors):
        x = factor.apply(x, op.m)
    return x


def identity(m: int) -> CliffordOp:
    return CliffordOp(m)


def g_d(p: BitMat) -> CliffordOp:
    if not p.is_invertible():
        raise DomainError("G_D requires an invertible matrix")
    return CliffordOp(p.rows, (Permutation(p),))


def g_u(s: BitMat) -> CliffordOp:
    if not s.is_symmetric():
        raise DomainError("G_U requires a symmetric matrix")
    return CliffordOp(s.rows, (DiagQuartic(s),))


def g_omega(m: int, r: int) -> CliffordOp:
    if not 0 <= r <= m:
        raise DomainError(f"Rank {r} outside 0..{m}")
    return CliffordOp(m, (PartialHadamard(r),))


def z_mr(m: int, r: int) -> CliffordOp:
    if not 0 <= r <= m:
        raise DomainError(f"Rank {r} outside 0..{m}")
    return CliffordOp(m, (ZPattern(r),))


def g_f(label: CosetLabel) -> CliffordOp:
    """G_D(P_I^T) G_U(S~_r) G_Omega(r); its columns are the codewords of `label` up to sign"""
    return (
        g_d(label.sub.completion.transpose())
        @ g_u(label.s_embedded())
        @ g_omega(label.m, label.r)
    )


def dense(op: CliffordOp) -> np.ndarray:
    if op.m > settings.MAX_DENSE_M:
        raise ResourceError(f"Dense materialization limited to m <= {settings.MAX_DENSE_M}")
    return apply(op, np.eye(2 ** op.m, dtype=complex))


def _identify_pauli(matrix: np.ndarray, m: int) -> BitVec:
    """(a, b) with matrix = lambda E(a, b), |lambda| = 1"""
    a = int(np.argmax(np.abs(matrix[:, 0])))
    pivot = matrix[a, 0]
    b = 0
    for j in range(m):
        v = 1 << (m - 1 - j)
        if (matrix[v ^ a, v] / pivot).real < 0:
            b |= v
    candidate = PauliElement.e(BitVec(m, a), BitVec(m, b)).to_dense()
    scale = pivot / candidate[a, 0]
    if abs(abs(scale) - 1) > 1e-9 or not np.allclose(matrix, scale * candidate, atol=1e-9):
        raise CliffordConsistencyError("Conjugated Pauli is not a Pauli matrix")
    return BitVec(m, a).concat(BitVec(m, b))


def phi(op: CliffordOp) -> SymplecticElement:
    """Symplectic matrix whose i-th row c_i satisfies G E(e_i) G^dagger = +-E(c_i)

    Rows act on row vectors, c -> c^T F, so phi reverses products:
    phi(A @ B) == phi(B) @ phi(A) and phi(G^dagger) == phi(G).inverse().
    Composed images therefore multiply right to left.
    """
    m = op.m
    g = dense(op)
    rows = []
    for i in range(2 * m):
        unit = BitVec.unit(2 * m, i)
        a, b = unit.split(m)
        conjugated = g @ PauliElement.e(a, b).to_dense() @ g.conj().T
        rows.append(_identify_pauli(conjugated, m).bits)
    return SymplecticElement(m, BitMat.from_rows(2 * m, rows))


def f_eval(v: BitVec, w: BitVec, r: int) -> int:
    """prod_{i > r} (1 + v_i + w_i) mod 2: 1 iff v, w agree on the last m - r coordinates"""
    if v.length != w.length:
        raise DimensionError("Vectors must share a length")
    low = (1 << (v.length - r)) - 1
    return int((v.bits ^ w.bits) & low == 0)
