import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from errors import PreconditionError
from window_core import IntegerWindow, LatticeWindow


def test_naive_sumset():
    assert oracle.naive_sumset([0, 1], [0, 2], IntegerWindow(-5, 5)).elements() == [0, 1, 2, 3]
    assert oracle.naive_sumset([0, 1], [0, 2], IntegerWindow(2, 5)).elements() == [2, 3]

def test_brute_reps_sorted_by_partner():
    assert oracle.brute_reps(3, [1, 2], [1, 2]) == [(2, 1), (1, 2)]
    assert oracle.brute_reps(10, [1, 2], [1, 2]) == []

def test_naive_lattice_sumset_clips():
    got = oracle.naive_lattice_sumset([(0, 0), (3, 3)], [(0, 1)], LatticeWindow.cube(-2, 2, 2))
    assert list(got) == [(0, 1)]

def test_brute_is_3ap_free():
    assert oracle.brute_is_3ap_free([0, 1, 3])
    assert not oracle.brute_is_3ap_free([0, 2, 4])
    assert oracle.brute_is_3ap_free([])

def test_cominimal_pair_with_singleton():
    assert oracle.brute_cominimal_cyclic([0], [0, 1], 2)
    assert not oracle.brute_cominimal_cyclic([0, 1], [0, 1], 2)
    assert oracle.brute_cominimal_cyclic([0, 1], [0, 1], 3)
    assert not oracle.brute_cominimal_cyclic([0], [0], 3)

def test_cominimal_rejects_bad_modulus():
    with pytest.raises(PreconditionError):
        oracle.brute_cominimal_cyclic([0], [0], 0)

def test_exhaustive_small_moduli():
    assert oracle.exhaustive_cyclic_cominimal(1) == [(frozenset({0}), frozenset({0}))]
    pairs = set(oracle.exhaustive_cyclic_cominimal(2))
    assert pairs == {
        (frozenset({0}), frozenset({0, 1})),
        (frozenset({1}), frozenset({0, 1})),
        (frozenset({0, 1}), frozenset({0})),
        (frozenset({0, 1}), frozenset({1})),
    }

@pytest.mark.parametrize("m", range(3, 7))
def test_exhaustive_is_symmetric_and_translation_invariant(m):
    pairs = set(oracle.exhaustive_cyclic_cominimal(m))
    for A, B in pairs:
        assert (B, A) in pairs
        assert (frozenset((a + 1) % m for a in A), B) in pairs

def test_exhaustive_range():
    with pytest.raises(PreconditionError):
        oracle.exhaustive_cyclic_cominimal(0)
    with pytest.raises(PreconditionError):
        oracle.exhaustive_cyclic_cominimal(15)

@given(st.integers(2, 9), st.data())
def test_cominimality_is_translation_invariant(m, data):
    A = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    B = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    c = data.draw(st.integers(0, m - 1))
    shifted = [(a + c) % m for a in A]
    assert oracle.brute_cominimal_cyclic(A, B, m) == oracle.brute_cominimal_cyclic(shifted, B, m)
