"""Tests for single-user and multi-user reconstruction"""

import time

import logging
import numpy as np
import pytest
import scipy.optimize

from subchirp.algebra.gf2core import BitMat, BitVec, rcef
from subchirp.algebra.pauli import pauli_spectrum
from subchirp.algebra.symplectic import CosetLabel, enumerate_cosets
from subchirp.codes.baselines import RandomCodebook, random_codebook
from subchirp.codes.bssc import BsscParams, Codebook, codebook_size, label_block, synthesize
from subchirp.decoding.decoder import (
    ReceivedSignal,
    decode_multi,
    decode_multi_exhaustive,
    decode_noiseless,
    decode_noiseless_block,
    decode_shift_multiply,
    detect_dual_subspace,
    estimate_candidate,
)
from subchirp.errors import DecodeError, DimensionError, DomainError
from subchirp.sim.runner import draw_index
from tests.conftest import all_params

logger = logging.getLogger(__name__)

RANK_ONE = CosetLabel(1, rcef([BitVec.from_string("10")]), BitMat.from_array([[0]]))


def vector(p: BsscParams) -> np.ndarray:
    return synthesize(p).to_vector()


@pytest.mark.parametrize("m", [1, 2, 3])
def test_noiseless_round_trip(m):
    for p in all_params(m):
        assert decode_noiseless(vector(p)) == p


@pytest.mark.slow
def test_noiseless_round_trip_m4():
    for p in all_params(4):
        assert decode_noiseless(vector(p)) == p


@pytest.mark.slow
def test_noiseless_round_trip_m5_sampled(rng):
    codebook = Codebook(5)
    for index in rng.integers(0, len(codebook), size=300):
        p = codebook.params(int(index))
        assert decode_noiseless(vector(p)) == p


@pytest.mark.parametrize("m", [1, 2, 3])
def test_block_decode_every_label(m, rng):
    for label in enumerate_cosets(m):
        scales = rng.standard_normal(2 ** m) + 1j * rng.standard_normal(2 ** m)
        decoded = decode_noiseless_block(label_block(label) * scales)
        assert decoded == [BsscParams(label, BitVec(m, b)) for b in range(2 ** m)]


def test_block_decode_mixed_columns(params_m3):
    chosen = params_m3[::7]
    block = np.column_stack([vector(p) for p in chosen])
    assert decode_noiseless_block(block) == chosen
    assert decode_noiseless_block(block[:, 3:4]) == [decode_noiseless(block[:, 3])]


def test_block_decode_rejections(rng):
    codeword = vector(BsscParams(RANK_ONE, BitVec.from_string("00")))
    with pytest.raises(DecodeError):
        decode_noiseless_block(np.column_stack([codeword, rng.standard_normal(4)]))
    with pytest.raises(DecodeError):
        decode_noiseless_block(np.zeros((4, 1)))
    with pytest.raises(DimensionError):
        decode_noiseless_block(codeword)
    with pytest.raises(DimensionError):
        decode_noiseless_block(np.ones((6, 2)))
    with pytest.raises(DomainError):
        decode_noiseless_block(np.full((4, 1), np.nan))


@pytest.mark.slow
def test_noiseless_round_trip_m5_exhaustive():
    bs = [BitVec(5, b) for b in range(32)]
    decoded_total = 0
    for label in enumerate_cosets(5):
        decoded = decode_noiseless_block(label_block(label))
        assert decoded[0].label == label
        assert all(p.label is decoded[0].label for p in decoded)
        assert [p.b for p in decoded] == bs
        decoded_total += len(decoded)
    assert decoded_total == codebook_size(5)


def test_worked_example():
    w = np.array([1, 0, 1, 0], dtype=complex) / np.sqrt(2)
    p = decode_noiseless(w)
    assert p == BsscParams(RANK_ONE, BitVec.from_string("00"))
    assert p.describe()["leading"] == "10"


def test_noiseless_is_scale_invariant(params_m3):
    c = 0.3 - 1.7j
    for p in params_m3[::11]:
        assert decode_noiseless(c * vector(p)) == p
    assert decode_noiseless(ReceivedSignal.from_samples(c * vector(params_m3[5]))) == params_m3[5]


def test_noiseless_rejects_non_codewords(rng):
    with pytest.raises(DecodeError):
        decode_noiseless(rng.standard_normal(8) + 1j * rng.standard_normal(8))
    with pytest.raises(DecodeError):
        decode_noiseless(np.zeros(8))
    with pytest.raises(DimensionError):
        decode_noiseless(np.ones(12))
    with pytest.raises(DomainError):
        decode_noiseless(np.array([1, np.nan]))


def test_sum_of_two_codewords_is_rejected():
    w = vector(BsscParams(RANK_ONE, BitVec.from_string("00")))
    w2 = Codebook(2, "bc").vector(0)
    with pytest.raises(DecodeError):
        decode_noiseless(w + w2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_shift_multiply_agrees(m):
    for p in all_params(m):
        assert decode_shift_multiply(vector(p)) == p


def test_detect_dual_subspace():
    w = np.array([1, 0, 1, 0], dtype=complex) / np.sqrt(2)
    spectrum = pauli_spectrum(w, 0)
    assert detect_dual_subspace(spectrum, 1).elements() == [0, 2]
    assert detect_dual_subspace(spectrum, 2).elements() == [0, 1, 2, 3]
    assert detect_dual_subspace(spectrum, 0).r == 0
    with pytest.raises(DomainError):
        detect_dual_subspace(spectrum, 3)


def test_estimate_candidate_per_rank(params_m3):
    for p in params_m3[::17]:
        w = vector(p)
        for r in range(4):
            candidate = estimate_candidate(w, r)
            if r == p.r:
                assert candidate.params == p
                assert candidate.score == pytest.approx(1.0)
            else:
                assert candidate.score < 0.75


def test_multi_single_user(rng, params_m3):
    for p in params_m3[::29]:
        h = complex(rng.standard_normal(), rng.standard_normal())
        result = decode_multi(h * vector(p), 1)
        assert result.recovered == [p]
        assert result.coefficients[0] == pytest.approx(h)
        assert result.residual_norm == pytest.approx(0.0, abs=1e-9)


def test_multi_two_binary_chirps():
    codebook = Codebook(4, "bc")
    p0, p1 = codebook.params(0), codebook.params(1)
    s = vector(p0) + 0.1 * vector(p1)
    result = decode_multi(s, 2)
    assert result.recovered == [p0, p1]
    assert np.allclose(result.coefficients, [1, 0.1])
    assert result.residual_norm == pytest.approx(0.0, abs=1e-9)


def test_multi_disjoint_supports():
    p0 = BsscParams(RANK_ONE, BitVec.from_string("00"))
    p1 = BsscParams(RANK_ONE, BitVec.from_string("01"))
    s = vector(p0) + 0.3j * vector(p1)
    result = decode_multi(s, 2)
    assert result.recovered == [p0, p1]
    assert np.allclose(result.coefficients, [1, 0.3j])


def test_multi_rank_restriction():
    codebook = Codebook(3, "bc")
    p = codebook.params(100)
    result = decode_multi(vector(p), 1, ranks=codebook.ranks)
    assert result.recovered == [p]


def test_multi_domain_errors():
    w = vector(BsscParams(RANK_ONE, BitVec.from_string("00")))
    with pytest.raises(DomainError):
        decode_multi(w, 0)
    with pytest.raises(DomainError):
        decode_multi(np.array([1, 1]) / np.sqrt(2), 7)


def test_exhaustive_on_random_codebook():
    rows = random_codebook(6, size=16, seed=3)
    s = rows[3] + 0.5 * rows[11]
    result = decode_multi_exhaustive(s, rows, 2)
    assert sorted(result.recovered) == [3, 11]
    found = dict(zip(result.recovered, result.coefficients))
    assert found[3] == pytest.approx(1.0)
    assert found[11] == pytest.approx(0.5)


def test_exhaustive_matches_structured():
    codebook = Codebook(3)
    rows = codebook.matrix()
    for index in range(0, len(codebook), 97):
        s = (0.8 + 0.6j) * rows[index]
        exhaustive = decode_multi_exhaustive(s, rows, 1, decode_index=codebook.params)
        structured = decode_multi(s, 1)
        assert exhaustive.recovered == structured.recovered == [codebook.params(index)]


def test_exhaustive_argument_checks():
    rows = random_codebook(2, size=4, seed=1)
    with pytest.raises(DimensionError):
        decode_multi_exhaustive(np.ones(8), rows, 1)
    with pytest.raises(DomainError):
        decode_multi_exhaustive(rows[0], rows, 5)


def test_multi_keeps_partial_result_when_nothing_new_remains():
    p0 = Codebook(1).params(0)
    s = np.array([1, 0], dtype=complex)
    assert np.allclose(vector(p0), s)
    result = decode_multi(s, 2)
    assert result.recovered == [p0]
    assert result.coefficients.shape == (1,)
    assert result.residual_norm == 0.0


def test_exhaustive_scans_random_codebook_in_blocks():
    codebook = RandomCodebook(3, size=100, seed=2, chunk_rows=7)
    rows = codebook.matrix()
    assert rows.shape == (100, 8)
    assert np.array_equal(codebook.vectors([99, 3, 50]), rows[[99, 3, 50]])
    s = 0.7 * rows[64] - 0.4j * rows[5]
    blockwise = decode_multi_exhaustive(s, codebook, 2)
    assert blockwise.recovered == decode_multi_exhaustive(s, rows, 2).recovered
    assert decode_multi_exhaustive(rows[64], codebook, 1).recovered == [64]
    with pytest.raises(DomainError):
        codebook.vectors([100])


@pytest.mark.slow
def test_exhaustive_random_m5_without_materializing():
    codebook = RandomCodebook(5, seed=9)
    assert codebook.size == codebook_size(5)
    index = draw_index(np.random.default_rng(4), codebook.size)
    s = (0.2 + 1.1j) * codebook.vectors([index])[0]
    assert decode_multi_exhaustive(s, codebook, 1).recovered == [index]


@pytest.mark.slow
def test_decode_cost_follows_n_m_cubed():
    """Median decode times for m = 6..10 against a + c * N m^3, fitted in relative terms"""
    rng = np.random.default_rng(8)
    orders = [6, 7, 8, 9, 10]
    decoders = {"noiseless": decode_noiseless, "multi": lambda s: decode_multi(s, 1)}
    measured = {name: [] for name in decoders}
    for m in orders:
        codebook = Codebook(m)
        signals = [codebook.vector(draw_index(rng, codebook.size)) for _ in range(5)]
        for name, decode in decoders.items():
            runs = []
            for s in signals:
                start = time.perf_counter()
                decode(s)
                runs.append(time.perf_counter() - start)
            measured[name].append(float(np.median(runs)))

    work = np.array([2.0 ** m * m ** 3 for m in orders])
    for name, seconds in measured.items():
        seconds = np.asarray(seconds)
        design = np.column_stack([np.ones_like(work), work]) / seconds[:, None]
        (overhead, slope), _ = scipy.optimize.nnls(design, np.ones_like(work))
        ratio = seconds / (overhead + slope * work)
        logger.info(
            f"{name}: overhead {overhead * 1e3:.3g} ms, {slope * 1e9:.3g} ns per N m^3, "
            f"measured/fitted {np.round(ratio, 2).tolist()}"
        )
        assert seconds[-1] > seconds[0]
        assert np.all((ratio > 1 / 3) & (ratio < 3))
