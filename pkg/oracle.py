"""Brute-force references for the fast paths. Nothing here shares code with them."""

import itertools
import logging
from typing import Iterable

from errors import PreconditionError
from window_core import IntegerWindow, LatticeSet, LatticeWindow, WindowedSet

logger = logging.getLogger(__name__)


def naive_sumset(A: Iterable[int], B: Iterable[int], target: IntegerWindow) -> WindowedSet:
    sums = {a + b for a in A for b in B}
    return WindowedSet.from_elements((y for y in sums if target.lo <= y <= target.hi), target)


def brute_reps(y: int, A: Iterable[int], B: Iterable[int]) -> list[tuple[int, int]]:
    """All (a, b) with a + b = y, sorted by b."""
    bs = set(B)
    return sorted(((a, y - a) for a in set(A) if y - a in bs), key=lambda p: p[1])


def naive_lattice_sumset(A: Iterable[tuple], B: Iterable[tuple], box: LatticeWindow) -> LatticeSet:
    sums = {tuple(x + y for x, y in zip(a, b)) for a in A for b in B}
    return LatticeSet.from_points(sums, box, clip=True)


def brute_is_3ap_free(A: Iterable[int]) -> bool:
    xs = sorted(set(A))
    for a, b, c in itertools.product(xs, repeat=3):
        if a != c and a + c == 2 * b:
            return False
    return True


def _rotate(mask: int, k: int, m: int) -> int:
    full = (1 << m) - 1
    k %= m
    return ((mask << k) | (mask >> (m - k))) & full


def _cyclic_sum(a_mask: int, b_mask: int, m: int) -> int:
    out = 0
    for k in range(m):
        if a_mask >> k & 1:
            out |= _rotate(b_mask, k, m)
    return out


def _is_minimal(a_mask: int, b_mask: int, m: int) -> bool:
    # Any proper complement inside A sits in some A minus {a}.
    full = (1 << m) - 1
    for k in range(m):
        bit = 1 << k
        if a_mask & bit and a_mask != bit and _cyclic_sum(a_mask & ~bit, b_mask, m) == full:
            return False
    return True


def brute_cominimal_cyclic(A: Iterable[int], B: Iterable[int], m: int) -> bool:
    """(A, B) co-minimal in Z_m, straight from the definition."""
    if m < 1:
        raise PreconditionError(f"modulus must be >= 1, got {m}")
    a_mask = sum(1 << (a % m) for a in set(A))
    b_mask = sum(1 << (b % m) for b in set(B))
    if not a_mask or not b_mask:
        return False
    if _cyclic_sum(a_mask, b_mask, m) != (1 << m) - 1:
        return False
    return _is_minimal(a_mask, b_mask, m) and _is_minimal(b_mask, a_mask, m)


def _members(mask: int, m: int) -> frozenset:
    return frozenset(k for k in range(m) if mask >> k & 1)


def exhaustive_cyclic_cominimal(m: int) -> list[tuple[frozenset, frozenset]]:
    """Every co-minimal pair (A, B) of Z_m.

    Pairs with |A| * |B| < m cannot cover Z_m and are skipped before any sum.
    """
    if not 1 <= m <= 14:
        raise PreconditionError(f"exhaustive enumeration needs 1 <= m <= 14, got {m}")
    full = (1 << m) - 1
    sizes = [bin(mask).count("1") for mask in range(full + 1)]
    out = []
    for a_mask in range(1, full + 1):
        for b_mask in range(1, full + 1):
            if sizes[a_mask] * sizes[b_mask] < m:
                continue
            if _cyclic_sum(a_mask, b_mask, m) != full:
                continue
            if _is_minimal(a_mask, b_mask, m) and _is_minimal(b_mask, a_mask, m):
                out.append((_members(a_mask, m), _members(b_mask, m)))
    logger.debug(f"Z_{m}: {len(out)} co-minimal pairs")
    return out
