"""Tests for Sp(2m;2) generators and coset labels"""

from itertools import combinations

import pytest

from subchirp.algebra.gf2core import BitMat, BitVec, rcef
from subchirp.algebra.symplectic import (
    CosetLabel,
    SymplecticElement,
    clifford_image,
    coset_count,
    coset_rank,
    coset_rep,
    coset_unrank,
    enumerate_cosets,
    enumerate_symmetric,
    f_d,
    f_omega,
    f_u,
    omega,
    symplectic_inner,
)
from subchirp.errors import DomainError


def test_coset_counts():
    assert [coset_count(m) for m in (1, 2, 3)] == [3, 15, 135]
    assert coset_count(3, ranks=[3]) == 64
    assert len(list(enumerate_cosets(3))) == 135


def test_symmetric_enumeration():
    mats = list(enumerate_symmetric(2))
    assert len(mats) == 8
    assert all(s.is_symmetric() for s in mats)
    assert len(set(mats)) == 8


def test_generators_are_symplectic():
    p = BitMat.from_array([[1, 1, 0], [0, 1, 0], [1, 0, 1]])
    s = BitMat.from_array([[1, 0, 1], [0, 0, 1], [1, 1, 0]])
    for element in (f_d(p), f_u(s), f_omega(3, 2), f_omega(3, 0), SymplecticElement.identity(3)):
        assert element.is_symplectic()
        assert element @ element.inverse() == SymplecticElement.identity(3)


def test_generator_domain_errors():
    with pytest.raises(DomainError):
        f_d(BitMat.from_array([[1, 1], [1, 1]]))
    with pytest.raises(DomainError):
        f_u(BitMat.from_array([[0, 1], [0, 0]]))
    with pytest.raises(DomainError):
        f_omega(2, 3)


def test_omega_form():
    assert omega(1).to_array().tolist() == [[0, 1], [1, 0]]
    assert symplectic_inner(BitVec.from_string("1000"), BitVec.from_string("0010")) == 1
    assert symplectic_inner(BitVec.from_string("1000"), BitVec.from_string("0100")) == 0


def test_act_preserves_inner_product():
    label = list(enumerate_cosets(2))[9]
    element = coset_rep(label)
    vectors = [BitVec(4, v) for v in range(16)]
    for c1, c2 in combinations(vectors, 2):
        assert symplectic_inner(element.act(c1), element.act(c2)) == symplectic_inner(c1, c2)


def test_label_validation():
    sub = rcef([BitVec.from_string("10")])
    with pytest.raises(DomainError):
        CosetLabel(2, sub, BitMat.zeros(2, 2))
    with pytest.raises(DomainError):
        CosetLabel(1, sub, BitMat.zeros(2, 2))


def test_coset_representatives_are_symplectic():
    for label in enumerate_cosets(3):
        assert coset_rep(label).is_symplectic()
        assert clifford_image(label).is_symplectic()


def test_labels_give_distinct_cosets():
    """No two labels differ by a left factor F_D F_U, whose lower-left block is zero"""
    m = 2
    images = [clifford_image(label) for label in enumerate_cosets(m)]
    lower_left = (list(range(m, 2 * m)), list(range(m)))
    for x, y in combinations(images, 2):
        quotient = (x @ y.inverse()).matrix
        assert quotient.block(*lower_left) != BitMat.zeros(m, m)


def test_coset_ranking_follows_enumeration():
    for index, label in enumerate(enumerate_cosets(3)):
        assert coset_rank(label) == index
        assert coset_unrank(3, index) == label
    with pytest.raises(DomainError):
        coset_unrank(3, 135)


def test_coset_ranking_with_rank_restriction():
    labels = list(enumerate_cosets(3, ranks=[3]))
    assert coset_unrank(3, 5, ranks=[3]) == labels[5]
    assert coset_rank(labels[5], ranks=[3]) == 5
    low = next(iter(enumerate_cosets(3, ranks=[1])))
    with pytest.raises(DomainError):
        coset_rank(low, ranks=[3])


def test_render_swap():
    assert f_omega(1, 1).render() == "01\n10"
