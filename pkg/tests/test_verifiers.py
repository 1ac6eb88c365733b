import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
import verifiers
from constructions import S_FAMILY, T_FAMILY, U_FAMILY, V_FAMILY, member, without
from errors import PreconditionError
from verifiers import ClaimResult
from window_core import IntegerWindow, part_bounds


@pytest.fixture(scope="module")
def st_results():
    return verifiers.check_claims_ST(3, 8, workers=2)

@pytest.fixture(scope="module")
def uv_results():
    return verifiers.check_claims_UV(3, 8)


def test_st_claims_all_hold(st_results):
    failed = [r for r in st_results if not r.holds]
    assert failed == []
    assert verifiers.suite_passed(st_results)

def test_st_claims_cover_every_index(st_results):
    ids = {r.claim_id for r in st_results}
    assert {"st.cover.left-half", "st.cover.right-half-q1", "st.cover.right-quarter", "st.j-cover",
            "st.left-half-cluster", "st.cover.small"} <= ids
    assert {r.n for r in st_results if r.claim_id == "st.cover.right-quarter"} == set(range(4, 9))

def test_results_are_sorted(st_results):
    keys = [(r.claim_id, -1 if r.n is None else r.n) for r in st_results]
    assert keys == sorted(keys)

def test_uv_claims_only_known_failure(uv_results):
    failed = [r for r in uv_results if not r.holds]
    assert [(r.claim_id, r.n) for r in failed] == [("uv.needs-positive-power", 5)]
    assert failed[0].counterexample == -35
    assert verifiers.suite_passed(uv_results)

def test_uv_fixed_targets_hold(uv_results):
    fixed = {r.claim_id: r.holds for r in uv_results if r.n is None}
    for claim_id in ("uv.needs-2", "uv.needs-1", "uv.needs-minus-1", "uv.needs-minus-2", "uv.needs-minus-4",
                     "uv.cover.small"):
        assert fixed[claim_id]

def test_positive_power_claim_holds_from_six():
    assert verifiers.uv_positive_power_target(5) == -35
    results = verifiers.check_claims_UV(6, 7)
    assert all(r.holds for r in results if r.claim_id == "uv.needs-positive-power")

def test_uv_finiteness():
    results = verifiers.check_uv_finiteness(4, 9)
    assert [r.n for r in results] == list(range(4, 10))
    assert all(r.holds for r in results)

def test_claim_ranges_are_checked():
    for lo, hi in ((1, 3), (5, 4), (2, 13)):
        with pytest.raises(PreconditionError):
            verifiers.check_claims_ST(lo, hi)
    with pytest.raises(PreconditionError):
        verifiers.check_uv_finiteness(3, 5)

def test_suite_passed_flags_unexpected_failure():
    assert not verifiers.suite_passed([ClaimResult("st.j-cover", 4, False, 3)])
    assert verifiers.suite_passed([ClaimResult("uv.needs-positive-power", 5, False, -35)])

def test_complement_S_T():
    result = verifiers.verify_complement_window(S_FAMILY, T_FAMILY, IntegerWindow(-4096, 4096))
    assert result.holds
    assert result.claim_id == "complement"

def test_complement_U_V():
    assert verifiers.verify_complement_window(U_FAMILY, V_FAMILY, IntegerWindow(-2048, 2048)).holds

def test_complement_accepts_swapped_operands():
    assert verifiers.verify_complement_window(T_FAMILY, S_FAMILY, IntegerWindow(-64, 64)).holds

def test_complement_fails_without_minus_two():
    result = verifiers.verify_complement_window(without(S_FAMILY, {-2}), T_FAMILY, IntegerWindow(-4, 0))
    assert not result.holds
    assert result.counterexample == -1

def test_complement_needs_a_power_family():
    with pytest.raises(PreconditionError):
        verifiers.verify_complement_window(S_FAMILY, U_FAMILY, IntegerWindow(-4, 4))

def test_minimality_of_powers_of_two():
    removable = [1 << k for k in range(9)]
    report = verifiers.verify_minimality(S_FAMILY, T_FAMILY, removable, IntegerWindow(-1024, 1024))
    assert report.direction == verifiers.B_OVER_A
    assert report.certification == verifiers.CERT_TAIL
    assert report.unverified == []
    assert report.entries[1] == -1
    assert report.entries[2] == -37

def test_power_of_two_witnesses_lie_in_second_quarter():
    removable = [1 << (n - 1) for n in range(3, 9)]
    report = verifiers.verify_minimality(S_FAMILY, T_FAMILY, removable, IntegerWindow(-1024, 1024))
    assert [report.entries[b] for b in removable] == [-11, -22, -44, -88, -176, -352]
    for n in range(3, 9):
        left, right = part_bounds(*part_bounds(-(1 << (n + 1)), -(1 << n) - 1, "right-half"), "q2")
        assert left <= report.entries[1 << (n - 1)] <= right

def test_minimality_witnesses_are_unique_representations():
    report = verifiers.verify_minimality(S_FAMILY, T_FAMILY, [4, 8, 16], IntegerWindow(-512, 512))
    for b, y in report.entries.items():
        reps = oracle.brute_reps(y, range(-4096, 0), [1 << k for k in range(13)])
        assert [p for p in reps if member(S_FAMILY, p[0])] == [(y - b, b)]

def test_minimality_over_U_and_V():
    report = verifiers.verify_minimality(U_FAMILY, V_FAMILY, [1, -1, 2, -2, -4, 4], IntegerWindow(-256, 256))
    assert report.entries == {1: -39, -1: -40, 2: 1, -2: -4, -4: -6, 4: -36}

def test_minimality_rejects_non_member():
    with pytest.raises(PreconditionError):
        verifiers.verify_minimality(S_FAMILY, T_FAMILY, [3], IntegerWindow(-64, 64))

def test_element_necessity():
    w = IntegerWindow(-256, 256)
    assert verifiers.verify_element_necessity_A(S_FAMILY, T_FAMILY, -4, w) == -3
    assert verifiers.verify_element_necessity_A(S_FAMILY, T_FAMILY, -2, w) == -1
    assert verifiers.verify_element_necessity_A(U_FAMILY, V_FAMILY, -40, w) == -39
    with pytest.raises(PreconditionError):
        verifiers.verify_element_necessity_A(S_FAMILY, T_FAMILY, -3, w)

def test_necessity_report():
    report = verifiers.verify_necessity(S_FAMILY, T_FAMILY, [-2, -4], IntegerWindow(-256, 256))
    assert report.direction == verifiers.A_OVER_B
    assert report.entries == {-2: -1, -4: -3}

def test_removable_family():
    assert verifiers.removable_element(3) == -135
    assert verifiers.removable_element(4) == -519
    results = verifiers.verify_removable_family([3, 4], IntegerWindow(-2048, 2048))
    assert [(r.claim_id, r.n, r.holds) for r in results] == [("st.removable", 3, True), ("st.removable", 4, True)]
    with pytest.raises(PreconditionError):
        verifiers.verify_removable_family([2], IntegerWindow(-64, 64))

def test_is_3ap_free():
    assert verifiers.is_3ap_free([1, 2, 4])
    assert not verifiers.is_3ap_free([1, 2, 3])
    assert verifiers.is_3ap_free([5])

@given(st.sets(st.integers(-30, 30), max_size=12))
def test_is_3ap_free_matches_brute_force(xs):
    assert verifiers.is_3ap_free(xs) == oracle.brute_is_3ap_free(xs)

def test_self_cominimal_cyclic_examples():
    assert verifiers.check_self_cominimal_cyclic([0, 1], 3)
    assert not verifiers.check_self_cominimal_cyclic([0, 1, 2], 5)
    assert not verifiers.check_self_cominimal_cyclic([0, 1], 2)
    with pytest.raises(PreconditionError):
        verifiers.check_self_cominimal_cyclic([0, 5], 3)

@pytest.mark.parametrize("m", range(1, 13))
def test_self_cominimal_cyclic_matches_definition(m):
    for mask in range(1, 1 << m):
        A = [k for k in range(m) if mask >> k & 1]
        assert verifiers.check_self_cominimal_cyclic(A, m) == oracle.brute_cominimal_cyclic(A, A, m), A

def test_claim_verdicts_do_not_depend_on_truncation():
    short = verifiers.check_claims_ST(3, 6)
    deep = verifiers.check_claims_ST(3, 6, truncation=14)
    assert [(r.claim_id, r.n, r.holds) for r in short] == [(r.claim_id, r.n, r.holds) for r in deep]
    short = verifiers.check_claims_UV(3, 6)
    deep = verifiers.check_claims_UV(3, 6, truncation=14)
    assert [(r.claim_id, r.n, r.holds) for r in short] == [(r.claim_id, r.n, r.holds) for r in deep]
