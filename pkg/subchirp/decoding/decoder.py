"""Reconstruction of binary subspace chirps

decode_noiseless recovers one codeword exactly from its Pauli spectra.
decode_multi runs orthogonal matching pursuit where each greedy step
estimates one codeword per rank hypothesis from the residual, keeps the
best-correlated estimate and refits all coefficients by least squares.
decode_multi_exhaustive is the same pursuit over an explicit codebook.
decode_noiseless_block decodes many single codewords with batched spectra.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import logging
import numpy as np
import scipy.linalg

from subchirp.algebra.gf2core import BinarySubspace, BitMat, BitVec, dual, parity, quadratic_form_mod4, rcef
from subchirp.algebra.pauli import PHASES, pauli_spectrum, signal_order, wht
from subchirp.algebra.symplectic import CosetLabel, coset_count
from subchirp.codes.baselines import RandomCodebook
from subchirp.codes.bssc import BsscParams, synthesize
from subchirp.config import settings
from subchirp.errors import DecodeError, DimensionError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReceivedSignal:
    m: int
    samples: np.ndarray

    @classmethod
    def from_samples(cls, samples) -> "ReceivedSignal":
        samples = np.asarray(samples, dtype=complex)
        if samples.ndim != 1:
            raise DimensionError("Received signal must be one-dimensional")
        if not np.all(np.isfinite(samples)):
            raise DomainError("Received signal has non-finite samples")
        return cls(signal_order(samples.shape[0]), samples)


@dataclass(frozen=True)
class Candidate:
    params: Optional[BsscParams]
    score: float


@dataclass(frozen=True)
class MultiUserResult:
    recovered: list
    coefficients: np.ndarray
    residual_norm: float


def _as_samples(s) -> np.ndarray:
    if isinstance(s, ReceivedSignal):
        return s.samples
    return ReceivedSignal.from_samples(s).samples


def _dechirp_peak(values: np.ndarray, s_r: BitMat) -> np.ndarray:
    """|WHT| of the support values after removing i^{x^T S_r x}"""
    xs = np.arange(values.shape[0], dtype=np.int64)
    return np.abs(wht(values * np.conj(PHASES[quadratic_form_mod4(s_r, xs)])))


def _coset_offset(sub: BinarySubspace, b_mr: int) -> int:
    return (sub.complement_selector() @ BitVec(sub.m - sub.r, b_mr)).bits


def _s_column(sub: BinarySubspace, y0: int) -> int:
    """S_r f_i from a spectrum peak y0 = I_I S_r f_i + H~ v"""
    m = sub.m
    v = sub.complement_selector().transpose() @ BitVec(m, y0)
    return (sub.selector().transpose() @ (BitVec(m, y0) + sub.dual_basis @ v)).bits


def _s_columns(sub: BinarySubspace, y0: np.ndarray) -> np.ndarray:
    """_s_column for an array of peaks"""
    v = sub.complement_selector().transpose().apply_to_indices(y0)
    return sub.selector().transpose().apply_to_indices(y0 ^ sub.dual_basis.apply_to_indices(v))


def _assemble(sub: BinarySubspace, columns: List[int]) -> BitMat:
    r = sub.r
    return BitMat(r, r, tuple(columns)) if r else BitMat.zeros(0, 0)


def _support_subspace(m: int, ys: np.ndarray) -> BinarySubspace:
    """H from the on-off pattern ys of the a = 0 spectrum, which must be cs(H~)"""
    dual_sub = rcef([BitVec(m, int(y)) for y in ys], m)
    if 2 ** dual_sub.r != ys.size or set(dual_sub.elements()) != set(int(y) for y in ys):
        raise DecodeError("Spectrum support is not a subspace")
    return dual(dual_sub)


def decode_noiseless(w) -> BsscParams:
    """
    Recover the parameters of a single noiseless codeword

    Args:
        w: Samples of c * w_b for one codeword w_b and any nonzero scalar c

    Returns:
        The exact transmitted parameters

    Raises:
        DecodeError: when the samples are not a binary subspace chirp
    """
    w = _as_samples(w)
    m = signal_order(w.shape[0])
    energy = float(np.vdot(w, w).real)
    if energy <= 0:
        raise DecodeError("Signal has no energy")
    threshold = 0.5 * energy

    # on-off pattern: nonzeros of the a = 0 spectrum form cs(H~)
    spectrum = pauli_spectrum(w, 0)
    sub = _support_subspace(m, np.flatnonzero(np.abs(spectrum) > threshold))
    r = sub.r

    columns = []
    for i in range(r):
        spectrum = pauli_spectrum(w, sub.basis.column(i))
        y0 = int(np.argmax(np.abs(spectrum)))
        if abs(spectrum[y0]) <= threshold:
            raise DecodeError(f"No stabilizer witness for row {i} of S_r")
        columns.append(_s_column(sub, y0))
    s_r = _assemble(sub, columns)
    if not s_r.is_symmetric():
        raise DecodeError("Recovered S_r is not symmetric")

    # dechirp
    a0 = int(np.argmax(np.abs(w)))
    b_mr = (sub.dual_basis.transpose() @ BitVec(m, a0)).bits
    support = sub.coset_indices(_coset_offset(sub, b_mr))
    peaks = _dechirp_peak(w[support], s_r)
    order = np.argsort(-peaks, kind="stable")
    if peaks.size > 1 and peaks[order[1]] > 0.5 * peaks[order[0]]:
        raise DecodeError("Dechirped support has no unique peak")
    b = BitVec(r, int(order[0])).concat(BitVec(m - r, b_mr))

    params = BsscParams(CosetLabel(r, sub, s_r), b)
    fit = abs(np.vdot(synthesize(params).to_vector(), w)) ** 2
    if fit < (1 - settings.ZERO_TOLERANCE) * energy:
        raise DecodeError("Signal is not a single codeword")
    return params


def _dechirp_block(block: np.ndarray, sub: BinarySubspace, s_r: BitMat, energy: np.ndarray) -> List[BsscParams]:
    """Dechirp and fit-check columns that share H and S_r"""
    m, r = sub.m, sub.r
    a0 = np.argmax(np.abs(block), axis=0)
    b_mr = sub.dual_basis.transpose().apply_to_indices(a0)
    offsets = sub.complement_selector().apply_to_indices(b_mr)
    support = sub.coset_indices()[:, None] ^ offsets[None, :]
    values = np.take_along_axis(block, support, axis=0)

    xs = np.arange(2 ** r, dtype=np.int64)
    quad = quadratic_form_mod4(s_r, xs)
    peaks = np.abs(wht(values * np.conj(PHASES[quad])[:, None]))
    b_r = np.argmax(peaks, axis=0)
    if r:
        second, first = np.sort(peaks, axis=0)[-2:]
        if np.any(second > 0.5 * first):
            raise DecodeError("Dechirped support has no unique peak")

    # |<w_b, column>|^2, the global sign drops out
    exponents = (quad[:, None] + 2 * parity(xs[:, None] & b_r[None, :])) % 4
    fit = np.abs(np.sum(np.conj(PHASES[exponents]) * values, axis=0)) ** 2 * 2.0 ** (-r)
    if np.any(fit < (1 - settings.ZERO_TOLERANCE) * energy):
        raise DecodeError("Column is not a single codeword")

    label = CosetLabel(r, sub, s_r)
    return [BsscParams(label, BitVec(r, int(x)).concat(BitVec(m - r, int(y)))) for x, y in zip(b_r, b_mr)]


def decode_noiseless_block(block) -> List[BsscParams]:
    """
    decode_noiseless for every column of an (N, K) array

    The spectra of all columns come from batched WHTs. Columns with the same
    on-off pattern share one subspace, and those that also share S_r are
    dechirped together, so a block holding one coset label costs a few
    array operations per rank.

    Args:
        block: Columns c_k * w_k, one scaled codeword each

    Returns:
        Parameters of every column, in column order

    Raises:
        DecodeError: when any column is not a single codeword
    """
    block = np.asarray(block, dtype=complex)
    if block.ndim != 2:
        raise DimensionError("Expected a two-dimensional block of columns")
    if not np.all(np.isfinite(block)):
        raise DomainError("Block has non-finite samples")
    m = signal_order(block.shape[0])
    energy = np.sum(np.abs(block) ** 2, axis=0)
    if np.any(energy <= 0):
        raise DecodeError(f"Column {int(np.argmin(energy))} has no energy")
    threshold = 0.5 * energy
    on = np.abs(wht(np.abs(block) ** 2)) > threshold

    patterns: Dict[bytes, List[int]] = {}
    for k in range(block.shape[1]):
        patterns.setdefault(on[:, k].tobytes(), []).append(k)

    decoded: List[Optional[BsscParams]] = [None] * block.shape[1]
    for members in patterns.values():
        sub = _support_subspace(m, np.flatnonzero(on[:, members[0]]))
        columns = block[:, members]
        s_cols = np.empty((len(members), sub.r), dtype=np.int64)
        for i in range(sub.r):
            spectra = np.abs(pauli_spectrum(columns, sub.basis.column(i)))
            y0 = np.argmax(spectra, axis=0)
            if np.any(spectra[y0, np.arange(len(members))] <= threshold[members]):
                raise DecodeError(f"No stabilizer witness for row {i} of S_r")
            s_cols[:, i] = _s_columns(sub, y0)

        chirps: Dict[Tuple[int, ...], List[int]] = {}
        for k, key in zip(members, map(tuple, s_cols.tolist())):
            chirps.setdefault(key, []).append(k)
        for key, group in chirps.items():
            s_r = _assemble(sub, list(key))
            if not s_r.is_symmetric():
                raise DecodeError("Recovered S_r is not symmetric")
            for k, params in zip(group, _dechirp_block(block[:, group], sub, s_r, energy[group])):
                decoded[k] = params
    return decoded


def decode_shift_multiply(w) -> BsscParams:
    """Recover a single noiseless codeword from its support and shifted products

    The support gives H and b_{m-r}. Shifts by H_I f_i keep the support,
    and the WHT of w(x + f_i) conj(w(x)) peaks at S_r f_i. Dechirping then
    gives b_r.
    """
    w = _as_samples(w)
    m = signal_order(w.shape[0])
    power = np.abs(w) ** 2
    if power.max() <= 0:
        raise DecodeError("Signal has no energy")
    on = np.flatnonzero(power > 0.5 * power.max())
    a0 = int(on[0])
    sub = rcef([BitVec(m, int(a) ^ a0) for a in on], m)
    r = sub.r
    if 2 ** r != on.size:
        raise DecodeError("Support is not an affine subspace")
    b_mr = (sub.dual_basis.transpose() @ BitVec(m, a0)).bits
    values = w[sub.coset_indices(_coset_offset(sub, b_mr))]
    if not np.all(np.abs(values) ** 2 > 0.5 * power.max()):
        raise DecodeError("Support is not an affine subspace")

    xs = np.arange(2 ** r, dtype=np.int64)
    columns = []
    for i in range(r):
        shift = 1 << (r - 1 - i)
        columns.append(int(np.argmax(np.abs(wht(values[xs ^ shift] * np.conj(values))))))
    s_r = _assemble(sub, columns)
    if not s_r.is_symmetric():
        raise DecodeError("Recovered S_r is not symmetric")
    b_r = int(np.argmax(_dechirp_peak(values, s_r)))
    return BsscParams(CosetLabel(r, sub, s_r), BitVec(r, b_r).concat(BitVec(m - r, b_mr)))


def detect_dual_subspace(spectrum: np.ndarray, r: int) -> BinarySubspace:
    """Greedy on-off hypothesis of rank r from the a = 0 spectrum

    y is admitted by decreasing |spectrum(y)|, ties to the smaller y, while
    it raises the span dimension, until the span H~ reaches m - r. Returns
    H = dual(H~).
    """
    m = signal_order(len(spectrum))
    if not 0 <= r <= m:
        raise DomainError(f"Rank hypothesis {r} outside 0..{m}")
    target = m - r
    gens: List[BitVec] = []
    for y in np.argsort(-np.abs(spectrum), kind="stable"):
        if len(gens) == target:
            break
        if y == 0:
            continue
        trial = gens + [BitVec(m, int(y))]
        if rcef(trial, m).r == len(trial):
            gens = trial
    return dual(rcef(gens, m))


def estimate_candidate(s, r: int, spectrum: Optional[np.ndarray] = None) -> Candidate:
    """The noiseless pipeline under a rank-r hypothesis, every choice made by largest magnitude"""
    s = _as_samples(s)
    m = signal_order(s.shape[0])
    if spectrum is None:
        spectrum = pauli_spectrum(s, 0)
    sub = detect_dual_subspace(spectrum, r)

    columns, witness = [], []
    for i in range(r):
        spec_i = np.abs(pauli_spectrum(s, sub.basis.column(i)))
        y0 = int(np.argmax(spec_i))
        columns.append(_s_column(sub, y0))
        witness.append(spec_i[y0])
    # symmetrize from the column with the stronger witness
    entries = [[(columns[j] >> (r - 1 - i)) & 1 for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            source = entries[i][j] if witness[j] >= witness[i] else entries[j][i]
            entries[i][j] = entries[j][i] = source
    s_r = BitMat.from_array(entries) if r else BitMat.zeros(0, 0)

    power = np.abs(s) ** 2
    keys = sub.dual_basis.transpose().apply_to_indices(np.arange(2 ** m, dtype=np.int64))
    coset_energy = np.bincount(keys, weights=power, minlength=2 ** (m - r))
    b_mr = int(np.argmax(coset_energy))
    if coset_energy[b_mr] <= 0:
        logger.debug(f"Rank {r}: empty support energy")
        return Candidate(None, 0.0)

    support = sub.coset_indices(_coset_offset(sub, b_mr))
    b_r = int(np.argmax(_dechirp_peak(s[support], s_r)))
    params = BsscParams(CosetLabel(r, sub, s_r), BitVec(r, b_r).concat(BitVec(m - r, b_mr)))
    score = float(abs(np.vdot(synthesize(params).to_vector(), s)))
    logger.debug(f"Rank {r}: score {score:.6g}")
    return Candidate(params, score)


def _refit(atoms: List[np.ndarray], s: np.ndarray) -> np.ndarray:
    """Least-squares coefficients of s on the chosen atoms"""
    a = np.column_stack(atoms)
    gram = a.conj().T @ a
    rhs = a.conj().T @ s
    try:
        return scipy.linalg.solve(gram, rhs, assume_a="her")
    except (scipy.linalg.LinAlgError, ValueError):
        logger.warning("Singular Gram matrix, falling back to the pseudo-inverse")
        return scipy.linalg.pinv(gram) @ rhs


def decode_multi(s, L: int, ranks: Optional[Sequence[int]] = None) -> MultiUserResult:
    """
    Recover L superposed codewords by structured orthogonal matching pursuit

    Args:
        s: Received samples, the sum of h_l w_l
        L: Number of active users, known to the receiver
        ranks: Rank hypotheses to try at every step, all of 0..m by default

    Returns:
        MultiUserResult with BsscParams in selection order. The pursuit stops
        early, with fewer than L entries, when every rank hypothesis yields
        nothing new.
    """
    s = _as_samples(s)
    m = signal_order(s.shape[0])
    ranks = tuple(range(m + 1)) if ranks is None else tuple(ranks)
    if L < 1:
        raise DomainError("At least one user is required")
    if L > 2 ** m * coset_count(m, ranks):
        raise DomainError(f"L={L} exceeds the codebook size")

    residual = s.copy()
    recovered: List[BsscParams] = []
    atoms: List[np.ndarray] = []
    coefficients = np.zeros(0, dtype=complex)
    for step in range(L):
        spectrum = pauli_spectrum(residual, 0)
        candidates = [estimate_candidate(residual, r, spectrum) for r in ranks]
        candidates = [c for c in candidates if c.params is not None and c.params not in recovered]
        if not candidates:
            logger.warning(f"No new candidate at step {step + 1}, keeping {len(recovered)} of {L} users")
            break
        best = max(candidates, key=lambda c: c.score)
        recovered.append(best.params)
        atoms.append(synthesize(best.params).to_vector())
        coefficients = _refit(atoms, s)
        residual = s - np.column_stack(atoms) @ coefficients
        logger.debug(f"Step {step + 1}: rank {best.params.r}, score {best.score:.6g}")
    return MultiUserResult(recovered, coefficients, float(np.linalg.norm(residual)))


def _blocks(codebook: Union[np.ndarray, RandomCodebook]) -> Iterator[Tuple[int, np.ndarray]]:
    if isinstance(codebook, RandomCodebook):
        return codebook.chunks()
    return iter([(0, codebook)])


def _best_row(codebook: Union[np.ndarray, RandomCodebook], residual: np.ndarray, chosen: List[int]) -> int:
    """Row with the largest |<c, residual>| outside `chosen`, ties to the smaller id"""
    best, best_score = -1, -1.0
    for start, block in _blocks(codebook):
        scores = np.abs(block.conj() @ residual)
        scores[[k - start for k in chosen if start <= k < start + block.shape[0]]] = -1.0
        j = int(np.argmax(scores))
        if scores[j] > best_score:
            best, best_score = start + j, float(scores[j])
    return best


def decode_multi_exhaustive(
    s,
    codebook: Union[np.ndarray, RandomCodebook],
    L: int,
    decode_index: Optional[Callable[[int], object]] = None,
) -> MultiUserResult:
    """Orthogonal matching pursuit with a full correlation scan per step

    `codebook` holds one unit-norm codeword per row, either materialized or
    as a RandomCodebook scanned block by block. Recovered entries are row
    indices, mapped through `decode_index` when given.
    """
    s = _as_samples(s)
    if isinstance(codebook, RandomCodebook):
        size, n = codebook.size, codebook.n
    else:
        codebook = np.asarray(codebook, dtype=complex)
        if codebook.ndim != 2:
            raise DimensionError(f"Codebook of shape {codebook.shape} is not a matrix")
        size, n = codebook.shape
    if n != s.shape[0]:
        raise DimensionError(f"Codebook rows of length {n} for {s.shape[0]} samples")
    if not 1 <= L <= size:
        raise DomainError(f"L={L} outside 1..{size}")

    residual = s.copy()
    chosen: List[int] = []
    atoms: List[np.ndarray] = []
    coefficients = np.zeros(0, dtype=complex)
    for _ in range(L):
        k = _best_row(codebook, residual, chosen)
        chosen.append(k)
        atoms.append(codebook.vectors([k])[0] if isinstance(codebook, RandomCodebook) else codebook[k])
        coefficients = _refit(atoms, s)
        residual = s - np.column_stack(atoms) @ coefficients
    recovered = [decode_index(k) for k in chosen] if decode_index else chosen
    return MultiUserResult(recovered, coefficients, float(np.linalg.norm(residual)))
