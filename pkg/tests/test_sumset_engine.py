import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
import sumset_engine
from constructions import S_FAMILY, T_FAMILY, U_FAMILY, V_FAMILY, finite, materialize, without
from errors import PreconditionError
from window_core import IntegerWindow, LatticeSet, LatticeWindow, WindowedSet

small_sets = st.sets(st.integers(-60, 60), min_size=1, max_size=40)
points = st.sets(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=15)


@settings(max_examples=1000)
@given(small_sets, small_sets)
def test_sumset_matches_naive(a, b):
    target = IntegerWindow(-80, 80)
    fast = sumset_engine.sumset(WindowedSet.from_elements(a), WindowedSet.from_elements(b), target)
    assert fast == oracle.naive_sumset(a, b, target)

def test_sumset_beats_naive_at_4096():
    rng = np.random.default_rng(7)
    a = rng.choice(np.arange(-(1 << 15), 1 << 15), size=4096, replace=False).tolist()
    b = rng.choice(np.arange(-(1 << 15), 1 << 15), size=4096, replace=False).tolist()
    target = IntegerWindow(-(1 << 15), (1 << 15) - 1)
    A, B = WindowedSet.from_elements(a), WindowedSet.from_elements(b)

    start = time.perf_counter()
    fast = sumset_engine.sumset(A, B, target)
    fast_secs = time.perf_counter() - start
    start = time.perf_counter()
    naive = oracle.naive_sumset(a, b, target)
    naive_secs = time.perf_counter() - start

    assert fast == naive
    assert naive_secs >= 50 * fast_secs

@settings(max_examples=25)
@given(st.sets(st.integers(-500, 500), min_size=70, max_size=150), st.sets(st.integers(-90, 90), min_size=70, max_size=120))
def test_sumset_threaded_matches_serial(a, b):
    A, B = WindowedSet.from_elements(a), WindowedSet.from_elements(b)
    target = IntegerWindow(-600, 600)
    assert sumset_engine.sumset(A, B, target, workers=4) == sumset_engine.sumset(A, B, target)

def test_sumset_with_empty_operand():
    empty = WindowedSet.empty(IntegerWindow(0, 4))
    out = sumset_engine.sumset(empty, WindowedSet.from_elements([1]), IntegerWindow(-3, 3))
    assert out.is_empty()
    assert out.window == IntegerWindow(-3, 3)

def test_sumset_clips_to_target():
    out = sumset_engine.sumset(WindowedSet.from_elements([0, 10]), WindowedSet.from_elements([1, 2]),
                               IntegerWindow(0, 5))
    assert out.elements() == [1, 2]

@given(points, points)
def test_sumset_lattice_matches_naive(a, b):
    box = LatticeWindow.cube(-8, 8, 2)
    A = LatticeSet(LatticeWindow.cube(-6, 6, 2), a)
    B = LatticeSet(LatticeWindow.cube(-6, 6, 2), b)
    assert sumset_engine.sumset_lattice(A, B, box) == oracle.naive_lattice_sumset(a, b, box)

def test_sumset_lattice_dimension_mismatch():
    A = LatticeSet(LatticeWindow.cube(0, 1, 2), [(0, 0)])
    B = LatticeSet(LatticeWindow.cube(0, 1, 3), [(0, 0, 0)])
    with pytest.raises(PreconditionError):
        sumset_engine.sumset_lattice(A, B, LatticeWindow.cube(0, 1, 2))

def test_powers():
    assert sumset_engine.powers(V_FAMILY, 2) == [1, -1, 2, -2, 4, -4]
    assert sumset_engine.powers(without(T_FAMILY, {2}), 3) == [1, 4, 8]

def test_representations_of_minus_two():
    rep = sumset_engine.representations(-2, S_FAMILY, T_FAMILY)
    assert list(rep.pairs[:5]) == [(-4, 2), (-6, 4), (-10, 8), (-18, 16), (-34, 32)]
    assert rep.tail.kind == "infinite"
    assert rep.tail.k0 <= 8
    assert not rep.complete

def test_representations_swap_operands():
    rep = sumset_engine.representations(-2, T_FAMILY, S_FAMILY)
    assert list(rep.pairs[:2]) == [(2, -4), (4, -6)]
    assert [abs(b) for b, _ in rep.pairs] == sorted(abs(b) for b, _ in rep.pairs)

def test_swapped_pairs_mirror_unswapped():
    for y in (-37, -2, 5):
        for A, B in ((S_FAMILY, T_FAMILY), (U_FAMILY, V_FAMILY)):
            direct = sumset_engine.representations(y, A, B)
            swapped = sumset_engine.representations(y, B, A)
            assert swapped.pairs == tuple((b, a) for a, b in direct.pairs)

def test_unique_representation_of_minus_37():
    rep = sumset_engine.representations(-37, S_FAMILY, T_FAMILY)
    assert rep.pairs == ((-39, 2),)
    assert rep.complete
    assert rep.uses_only(2)

def test_minus_38_is_not_a_witness_for_two():
    rep = sumset_engine.representations(-38, S_FAMILY, T_FAMILY)
    assert (-39, 1) in rep.pairs
    assert not rep.uses_only(2)

def test_representations_over_U_and_V():
    rep = sumset_engine.representations(-39, U_FAMILY, V_FAMILY)
    assert rep.pairs == ((-40, 1),)
    assert rep.complete

def test_representations_over_finite_family():
    rep = sumset_engine.representations(5, finite([1, 3]), T_FAMILY)
    assert rep.pairs == ((3, 2), (1, 4))
    assert rep.complete

def test_representations_preconditions():
    with pytest.raises(PreconditionError):
        sumset_engine.representations(100, S_FAMILY, T_FAMILY, horizon=3)
    with pytest.raises(PreconditionError):
        sumset_engine.representations(1, S_FAMILY, U_FAMILY)
    with pytest.raises(PreconditionError):
        sumset_engine.representations(1, T_FAMILY, V_FAMILY)

@given(st.integers(-64, 64))
def test_representations_match_brute_force(y):
    S = materialize(S_FAMILY, IntegerWindow(-700, -1)).elements()
    T = materialize(T_FAMILY, IntegerWindow(1, 512)).elements()
    rep = sumset_engine.representations(y, S_FAMILY, T_FAMILY, horizon=13)
    assert [p for p in rep.pairs if p[1] <= 512] == oracle.brute_reps(y, S, T)

def test_covered_by_agrees_with_representations():
    ys = np.arange(-200, 201)
    hit = sumset_engine.covered_by(ys, S_FAMILY, T_FAMILY, horizon=14)
    for y, h in zip(ys.tolist(), hit.tolist()):
        assert h == bool(sumset_engine.representations(y, S_FAMILY, T_FAMILY, horizon=14).pairs)

def test_removed_partner_element_loses_witness_target():
    rep = sumset_engine.representations(-37, S_FAMILY, without(T_FAMILY, {2}))
    assert rep.pairs == ()
    assert rep.complete

@pytest.mark.parametrize("y", range(-255, 256, 7))
def test_uv_representations_stable_in_horizon(y):
    assert (sumset_engine.representations(y, U_FAMILY, V_FAMILY, horizon=14).pairs
            == sumset_engine.representations(y, U_FAMILY, V_FAMILY, horizon=22).pairs)
