import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import constructions
from constructions import S_FAMILY, T_FAMILY, U_FAMILY, V_FAMILY, FamilySpec
from errors import PreconditionError, StabilizationError
from verifiers import is_3ap_free
from window_core import IntegerWindow, LatticeWindow


def test_gen_J_small_indices():
    assert constructions.gen_J(0).elements() == [1]
    assert constructions.gen_J(1).elements() == [1]
    assert constructions.gen_J(2).elements() == [1, 3]
    assert constructions.gen_J(3).elements() == [1, 2, 5, 7]

def test_gen_K():
    assert constructions.gen_K(2).elements() == [3]
    assert constructions.gen_K(4).elements() == [3, 4, 13, 15]

@given(st.integers(2, 14))
def test_J_and_K_top_element(n):
    assert max(constructions.gen_J(n).elements()) == (1 << n) - 1
    assert max(constructions.gen_K(n).elements()) == (1 << n) - 1

def test_gen_I():
    assert constructions.gen_I(0).elements() == [-2]
    assert constructions.gen_I(3).elements() == [-15, -10]
    assert constructions.gen_I(5).elements() == [-60, -59, -58, -57, -40, -39, -36, -34]

def test_gen_U():
    assert constructions.gen_U(0).elements() == [-2, -1]
    assert constructions.gen_U(1).is_empty()
    assert constructions.gen_U(3).elements() == [-11]
    assert constructions.gen_U(4).elements() == [-30, -29, -19]
    assert constructions.gen_U(5).elements() == [-60, -59, -58, -57, -40, -39]

@given(st.integers(1, 12))
def test_blocks_sit_inside_script_I(n):
    block = constructions.gen_script_I(n)
    assert block.elements() == list(range(-(1 << (n + 1)), -(1 << n)))
    for x in constructions.gen_I(n).elements() + constructions.gen_U(n).elements():
        assert constructions.block_index(x) == n

def test_negative_index_rejected():
    with pytest.raises(PreconditionError):
        constructions.gen_J(-1)

def test_block_index():
    assert constructions.block_index(5) is None
    assert [constructions.block_index(x) for x in (-1, -2, -3, -4, -5, -8, -9)] == [0, 0, 1, 1, 2, 2, 3]

@given(st.lists(st.integers(-(1 << 40), 1 << 40), min_size=1, max_size=50))
def test_block_index_array_matches_scalar(xs):
    expected = [-1 if constructions.block_index(x) is None else constructions.block_index(x) for x in xs]
    assert constructions.block_index_array(np.array(xs)).tolist() == expected

@given(st.lists(st.integers(-5000, 5000), min_size=1, max_size=60))
def test_member_array_matches_member(xs):
    for f in (S_FAMILY, U_FAMILY, T_FAMILY, V_FAMILY, constructions.without(S_FAMILY, {-2, -135})):
        assert constructions.member_array(f, xs).tolist() == [constructions.member(f, x) for x in xs]

def test_materialize_S():
    assert constructions.materialize(S_FAMILY, IntegerWindow(-16, -1)).elements() == [-15, -10, -6, -4, -2]

def test_materialize_V():
    got = constructions.materialize(V_FAMILY, IntegerWindow(-8, 8)).elements()
    assert got == [-8, -4, -2, -1, 1, 2, 4, 8]

def test_membership_of_removable_element():
    assert constructions.member(S_FAMILY, -135)
    assert not constructions.member(constructions.without(S_FAMILY, {-135}), -135)

def test_derived_families():
    assert constructions.member(constructions.negated(T_FAMILY), -4)
    assert not constructions.member(constructions.negated(T_FAMILY), 4)
    assert constructions.member(constructions.shifted(T_FAMILY, 1), 5)
    assert constructions.member(constructions.finite([3, -7]), -7)

def test_without_flattens():
    f = constructions.without(constructions.without(S_FAMILY, {-2}), {-4})
    assert f.kind == "without"
    assert f.base == S_FAMILY
    assert f.removed == frozenset({-2, -4})
    assert constructions.root_kind(f) == "S"

def test_root_kind_and_finiteness():
    assert constructions.root_kind(FamilySpec("U", n=4)) == "finite"
    assert constructions.root_kind(U_FAMILY) == "U"
    assert constructions.is_finite(FamilySpec("I", n=3))
    assert not constructions.is_finite(S_FAMILY)
    assert constructions.max_abs(FamilySpec("I", n=3)) == 16
    with pytest.raises(PreconditionError):
        constructions.max_abs(S_FAMILY)

def test_family_spec_validation():
    with pytest.raises(PreconditionError):
        FamilySpec("Q")
    with pytest.raises(PreconditionError):
        FamilySpec("I")
    with pytest.raises(PreconditionError):
        FamilySpec("shift", c=3)

def test_family_spec_dict_form():
    f = constructions.shifted(constructions.without(S_FAMILY, {-2}), 5)
    assert FamilySpec.from_dict(f.to_dict()) == f
    assert FamilySpec.from_dict({"kind": "shifted", "c": 2, "base": {"kind": "T"}}) == constructions.shifted(T_FAMILY, 2)
    with pytest.raises(PreconditionError):
        FamilySpec.from_dict({"n": 3})

def test_parse_family_shorthand_and_json():
    assert constructions.parse_family("I:3") == FamilySpec("I", n=3)
    assert constructions.parse_family("V") == V_FAMILY
    assert constructions.parse_family("W:-64..64") == constructions.w_family(IntegerWindow(-64, 64))
    assert constructions.parse_family('{"kind": "K", "n": 4}') == FamilySpec("K", n=4)
    for bad in ("X", "I:x", "{not json"):
        with pytest.raises(PreconditionError):
            constructions.parse_family(bad)

def test_materialize_lattice_product():
    f = constructions.product(T_FAMILY, constructions.negated(T_FAMILY))
    X = constructions.materialize_lattice(f, LatticeWindow.cube(-4, 4, 2))
    assert len(X) == 9
    assert (2, -4) in X
    assert constructions.member(f, (2, -4))
    with pytest.raises(PreconditionError):
        constructions.materialize_lattice(f, LatticeWindow.cube(-4, 4, 3))

def test_iter_by_magnitude():
    assert list(itertools.islice(constructions.iter_by_magnitude(S_FAMILY), 5)) == [-2, -4, -6, -10, -15]
    assert list(itertools.islice(constructions.iter_by_magnitude(U_FAMILY), 6)) == [-1, -2, -11, -19, -29, -30]
    with pytest.raises(PreconditionError):
        next(constructions.iter_by_magnitude(T_FAMILY))

def test_tail_membership_settles():
    verdict = constructions.tail_membership(S_FAMILY, 7)
    assert verdict.k0 == 7
    assert verdict.value is False
    assert constructions.tail_membership(S_FAMILY, -2).value is True

def test_tail_membership_too_early_start_raises():
    with pytest.raises(StabilizationError) as info:
        constructions.tail_membership(S_FAMILY, 7, k0=6)
    assert info.value.first_change == 7

def test_tail_membership_arguments():
    with pytest.raises(PreconditionError):
        constructions.tail_membership(S_FAMILY, 7, span=4)
    with pytest.raises(PreconditionError):
        constructions.tail_membership(S_FAMILY, 7, sign="*")

def test_greedy_W():
    W = constructions.gen_W_greedy(IntegerWindow(-64, 64))
    half = [1, 2, 7, 8, 19, 20, 25, 26, 55, 56]
    assert W.elements() == sorted([-x for x in half] + half)

def test_greedy_W_properties():
    w = IntegerWindow(-64, 64)
    W = constructions.gen_W_greedy(w)
    xs = W.elements()
    assert xs == sorted(-x for x in xs)
    assert is_3ap_free(W)
    sums = {a + b for a in xs for b in xs}
    mid = w.middle_half()
    assert all(y in sums for y in range(mid.lo, mid.hi + 1))

def test_greedy_W_needs_symmetric_window():
    with pytest.raises(PreconditionError):
        constructions.gen_W_greedy(IntegerWindow(-10, 12))
