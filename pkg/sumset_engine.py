"""Windowed sumsets and exact representation enumeration with tail classification."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from constructions import (
    DEFAULT_TAIL_SPAN,
    FamilySpec,
    default_tail_start,
    max_abs,
    member,
    member_array,
    removed_elements,
    root_kind,
    tail_membership,
)
from errors import PreconditionError
from window_core import IntegerWindow, LatticeSet, LatticeWindow, WindowedSet

logger = logging.getLogger(__name__)

POWER_KINDS = ("T", "V")


# ---------------------------------------------------------------------------
# Sumsets
# ---------------------------------------------------------------------------

def _shift_or(out: np.ndarray, target: IntegerWindow, large: WindowedSet, shifts: np.ndarray) -> None:
    """OR large + x into out for every x in shifts."""
    for x in shifts.tolist():
        lo = max(large.window.lo + x, target.lo)
        hi = min(large.window.hi + x, target.hi)
        if lo > hi:
            continue
        src = large.bits[lo - x - large.window.lo:hi - x - large.window.lo + 1]
        out[lo - target.lo:hi - target.lo + 1] |= src


def sumset(a: WindowedSet, b: WindowedSet, target: IntegerWindow, workers: int = 1) -> WindowedSet:
    """(a + b) clipped to target.

    Iterates over the smaller operand and ORs shifted copies of the larger
    one's bitset. With workers > 1 the shifts are split into chunks whose
    partial results are OR-merged, so the output does not depend on chunking.
    """
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    shifts = small.as_array()
    if shifts.size == 0 or large.is_empty():
        return WindowedSet.empty(target)

    if workers <= 1 or shifts.size < 64:
        out = np.zeros(target.width, dtype=bool)
        _shift_or(out, target, large, shifts)
        return WindowedSet(target, out)

    def run(chunk: np.ndarray) -> np.ndarray:
        part = np.zeros(target.width, dtype=bool)
        _shift_or(part, target, large, chunk)
        return part

    chunks = np.array_split(shifts, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, chunks))
    return WindowedSet(target, np.logical_or.reduce(parts))


def sumset_lattice(a: LatticeSet, b: LatticeSet, box: LatticeWindow) -> LatticeSet:
    """(a + b) clipped to box."""
    if a.d != b.d or a.d != box.d:
        raise PreconditionError(f"dimension mismatch: {a.d}, {b.d}, box {box.d}")
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    out = np.zeros(box.shape, dtype=bool)
    if not len(small) or not len(large):
        return LatticeSet(box, ())

    mask = large.to_mask()
    for p in small:
        dst, src = [], []
        for x, lw, bw in zip(p, large.window.dims, box.dims):
            lo = max(lw.lo + x, bw.lo)
            hi = min(lw.hi + x, bw.hi)
            if lo > hi:
                break
            dst.append(slice(lo - bw.lo, hi - bw.lo + 1))
            src.append(slice(lo - x - lw.lo, hi - x - lw.lo + 1))
        else:
            out[tuple(dst)] |= mask[tuple(src)]

    idx = np.argwhere(out) + box.origin
    return LatticeSet(box, (tuple(row) for row in idx.tolist()))


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailInfo:
    kind: str
    k0: int | None = None
    desc: str = ""


@dataclass(frozen=True)
class RepresentationReport:
    y: int
    pairs: tuple
    tail: TailInfo
    horizon: int

    @property
    def complete(self) -> bool:
        return self.tail.kind == "none"

    def uses_only(self, b: int) -> bool:
        """True when every listed pair uses b and nothing hides in a tail."""
        return self.complete and bool(self.pairs) and all(pb == b for _, pb in self.pairs)


def is_power_family(f: FamilySpec) -> bool:
    if f.kind == "without":
        return is_power_family(f.base)
    return f.kind in POWER_KINDS


def power_root(f: FamilySpec) -> str:
    return f.kind if f.kind in POWER_KINDS else power_root(f.base)


def powers(f: FamilySpec, horizon: int) -> list[int]:
    """Elements of a power family with |b| <= 2^horizon, ordered by |b| then sign."""
    removed = removed_elements(f)
    signs = (1,) if power_root(f) == "T" else (1, -1)
    out = []
    for k in range(horizon + 1):
        for s in signs:
            b = s * (1 << k)
            if b not in removed:
                out.append(b)
    return out


def min_horizon(y: int) -> int:
    return abs(y).bit_length() + 6


def uv_complete_horizon(y: int) -> int:
    """Exponent bound past which no (U, V) representation of y exists.

    With 2^(n-3) > |y| every u comes from a block below n, so |v| <= |y| + 2^n.
    """
    n = max(4, abs(y).bit_length() + 3)
    return (abs(y) + (1 << n)).bit_length()


def representations(y: int, A: FamilySpec, B: FamilySpec, horizon: int | None = None,
                    span: int = DEFAULT_TAIL_SPAN) -> RepresentationReport:
    """Every (a, b) with a + b = y, a in A, b in B, |b| <= 2^horizon, plus the tail beyond.

    One of A, B must be a power family (T or V, optionally minus finitely many
    elements). For S-derived partners the tail is classified with
    tail_membership; U-derived and finite partners are enumerated to
    completeness, so their tail is always none.

    Raises:
        PreconditionError: horizon below bit-length(|y|) + 6, or no power family
        StabilizationError: a tail never settles on the scanned span
    """
    swapped = False
    if not is_power_family(B):
        if not is_power_family(A):
            raise PreconditionError(f"one of {A}, {B} must be T or V")
        A, B, swapped = B, A, True

    if horizon is None:
        horizon = min_horizon(y)
    elif horizon < min_horizon(y):
        raise PreconditionError(f"horizon {horizon} below {min_horizon(y)} for y={y}")

    root = root_kind(A)
    tail = TailInfo("none")
    verdicts = []
    if root == "U":
        horizon = max(horizon, uv_complete_horizon(y))
    elif root == "finite":
        horizon = max(horizon, (abs(y) + max_abs(A)).bit_length() + 1)
    elif root == "S":
        k0 = default_tail_start(A, y)
        horizon = max(horizon, k0 - 1)
        scanned = max(span, horizon - k0 + span)
        signs = ("+",) if power_root(B) == "T" else ("+", "-")
        for sign in signs:
            verdict = tail_membership(A, y, sign, k0=k0, span=scanned)
            if verdict.value:
                verdicts.append((sign, verdict))
    else:
        raise PreconditionError(f"representations over {A} are not supported")

    pairs = [(y - b, b) for b in powers(B, horizon) if member(A, y - b)]
    if verdicts:
        k0 = min(v.k0 for _, v in verdicts)
        desc = "; ".join(f"{y} - ({s}2^k) in {A} for every k >= {v.k0}" for s, v in verdicts)
        tail = TailInfo("infinite", k0, desc)
        logger.debug(f"y={y}: infinite tail ({desc})")

    pairs.sort(key=lambda p: (abs(p[1]), p[1]))
    if swapped:
        pairs = [(b, a) for a, b in pairs]
    return RepresentationReport(y=y, pairs=tuple(pairs), tail=tail, horizon=horizon)


def covered_by(ys: np.ndarray, A: FamilySpec, B: FamilySpec, horizon: int) -> np.ndarray:
    """Vectorized: which targets have at least one pair below horizon."""
    ys = np.asarray(ys, dtype=np.int64)
    hit = np.zeros(ys.shape, dtype=bool)
    for b in powers(B, horizon):
        hit |= member_array(A, ys - b)
    return hit

