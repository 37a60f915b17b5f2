"""Shared fixtures and dense oracles"""

from typing import List

import numpy as np
import pytest

from subchirp.algebra.gf2core import BitVec
from subchirp.codes.bssc import BsscParams, enumerate_params

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def kron_all(factors) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for factor in factors:
        out = np.kron(out, factor)
    return out


def dense_d(a: BitVec, b: BitVec) -> np.ndarray:
    """D(a, b) as a Kronecker product, coordinate 0 first"""
    factors = []
    for j in range(a.length):
        factor = np.eye(2, dtype=complex)
        if a[j]:
            factor = factor @ SIGMA_X
        if b[j]:
            factor = factor @ SIGMA_Z
        factors.append(factor)
    return kron_all(factors)


def all_params(m: int) -> List[BsscParams]:
    return list(enumerate_params(m))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def params_m2():
    return all_params(2)


@pytest.fixture(scope="session")
def params_m3():
    return all_params(3)
