"""Exact finite set arithmetic over integer windows in Z and boxes in Z^d."""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from errors import PreconditionError, WindowOverflowError

logger = logging.getLogger(__name__)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

PARTS = ("left-half", "right-half", "q1", "q2", "q3", "q4")


# ---------------------------------------------------------------------------
# Windows
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegerWindow:
    """Closed interval [lo, hi] with signed 64-bit bounds."""

    lo: int
    hi: int

    def __post_init__(self):
        for bound in (self.lo, self.hi):
            if not INT64_MIN <= bound <= INT64_MAX:
                raise WindowOverflowError(f"window bound {bound} outside int64")
        if self.lo > self.hi:
            raise PreconditionError(f"empty window [{self.lo}, {self.hi}]")

    @classmethod
    def parse(cls, text: str) -> "IntegerWindow":
        """Parse "LO..HI" (both inclusive)."""
        try:
            lo, hi = text.split("..")
            return cls(int(lo), int(hi))
        except ValueError:
            raise PreconditionError(f"bad window {text!r}, expected LO..HI") from None

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def contains(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def hull(self, other: "IntegerWindow") -> "IntegerWindow":
        return IntegerWindow(min(self.lo, other.lo), max(self.hi, other.hi))

    def overlap(self, other: "IntegerWindow") -> "IntegerWindow | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return IntegerWindow(lo, hi) if lo <= hi else None

    def middle_half(self) -> "IntegerWindow":
        quarter = self.width // 4
        return IntegerWindow(self.lo + quarter, self.hi - quarter)

    def arange(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def __str__(self) -> str:
        return f"{self.lo}..{self.hi}"


@dataclass(frozen=True)
class LatticeWindow:
    """Axis-aligned box in Z^d, one IntegerWindow per axis."""

    dims: tuple[IntegerWindow, ...]

    def __post_init__(self):
        if len(self.dims) < 1:
            raise PreconditionError("a lattice window needs at least one axis")

    @classmethod
    def parse(cls, text: str) -> "LatticeWindow":
        """Parse "LO..HI,LO..HI,..." into a box."""
        return cls(tuple(IntegerWindow.parse(part.strip()) for part in text.split(",")))

    @classmethod
    def cube(cls, lo: int, hi: int, d: int) -> "LatticeWindow":
        return cls(tuple(IntegerWindow(lo, hi) for _ in range(d)))

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(w.width for w in self.dims)

    @property
    def origin(self) -> np.ndarray:
        return np.array([w.lo for w in self.dims], dtype=np.int64)

    def contains(self, point: Sequence[int]) -> bool:
        return len(point) == self.d and all(w.contains(x) for w, x in zip(self.dims, point))

    def hull(self, other: "LatticeWindow") -> "LatticeWindow":
        if other.d != self.d:
            raise PreconditionError(f"dimension mismatch: {self.d} vs {other.d}")
        return LatticeWindow(tuple(a.hull(b) for a, b in zip(self.dims, other.dims)))

    def middle_half(self) -> "LatticeWindow":
        return LatticeWindow(tuple(w.middle_half() for w in self.dims))

    def __str__(self) -> str:
        return ",".join(str(w) for w in self.dims)


# ---------------------------------------------------------------------------
# Windowed sets
# ---------------------------------------------------------------------------

class WindowedSet:
    """Immutable dense membership bitset over an IntegerWindow.

    Bit i is set iff lo + i is a member.
    """

    __slots__ = ("window", "bits")

    def __init__(self, window: IntegerWindow, bits: np.ndarray):
        bits = np.asarray(bits, dtype=bool)
        if bits.shape != (window.width,):
            raise PreconditionError(
                f"bitset of length {bits.shape} does not fit window of width {window.width}"
            )
        bits = bits.copy()
        bits.flags.writeable = False
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("WindowedSet is immutable")

    @classmethod
    def empty(cls, window: IntegerWindow) -> "WindowedSet":
        return cls(window, np.zeros(window.width, dtype=bool))

    @classmethod
    def from_elements(cls, elements: Iterable[int], window: IntegerWindow | None = None) -> "WindowedSet":
        xs = np.fromiter((int(x) for x in elements), dtype=np.int64)
        if window is None:
            if xs.size == 0:
                raise PreconditionError("an empty element list needs an explicit window")
            window = IntegerWindow(int(xs.min()), int(xs.max()))
        if xs.size and (xs.min() < window.lo or xs.max() > window.hi):
            raise PreconditionError(f"elements fall outside window {window}")
        bits = np.zeros(window.width, dtype=bool)
        bits[xs - window.lo] = True
        return cls(window, bits)

    def elements(self) -> list[int]:
        return (np.flatnonzero(self.bits) + self.window.lo).tolist()

    def as_array(self) -> np.ndarray:
        return np.flatnonzero(self.bits).astype(np.int64) + self.window.lo

    def is_empty(self) -> bool:
        return not self.bits.any()

    def rewindow(self, window: IntegerWindow) -> "WindowedSet":
        """Same members clipped to `window`, padded with zeros where it is wider."""
        bits = np.zeros(window.width, dtype=bool)
        common = self.window.overlap(window)
        if common is not None:
            src = slice(common.lo - self.window.lo, common.hi - self.window.lo + 1)
            dst = slice(common.lo - window.lo, common.hi - window.lo + 1)
            bits[dst] = self.bits[src]
        return WindowedSet(window, bits)

    def to_runs(self) -> list[tuple[int, int]]:
        """Maximal runs of members as (start, length) pairs."""
        padded = np.concatenate(([False], self.bits, [False])).astype(np.int8)
        edges = np.flatnonzero(np.diff(padded))
        starts, ends = edges[0::2], edges[1::2]
        return [(int(s) + self.window.lo, int(e - s)) for s, e in zip(starts, ends)]

    @classmethod
    def from_runs(cls, runs: Iterable[Sequence[int]], window: IntegerWindow) -> "WindowedSet":
        bits = np.zeros(window.width, dtype=bool)
        for start, length in runs:
            if length < 0 or start < window.lo or start + length - 1 > window.hi:
                raise PreconditionError(f"run ({start}, {length}) outside window {window}")
            bits[start - window.lo:start - window.lo + length] = True
        return cls(window, bits)

    def __contains__(self, x) -> bool:
        x = int(x)
        return self.window.contains(x) and bool(self.bits[x - self.window.lo])

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __iter__(self):
        return iter(self.elements())

    def __eq__(self, other) -> bool:
        if not isinstance(other, WindowedSet):
            return NotImplemented
        return self.window == other.window and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.window, self.bits.tobytes()))

    def __repr__(self) -> str:
        shown = self.elements()
        if len(shown) > 12:
            shown = shown[:6] + ["..."] + shown[-6:]
        return f"WindowedSet([{self.window}], {shown})"


def interval(lo: int, hi: int) -> WindowedSet:
    """The full interval {lo..hi}."""
    window = IntegerWindow(lo, hi)
    return WindowedSet(window, np.ones(window.width, dtype=bool))


def elements(s: WindowedSet) -> list[int]:
    return s.elements()


def shift(s: WindowedSet, c: int) -> WindowedSet:
    """Translate by c; the window moves with the set."""
    window = IntegerWindow(s.window.lo + c, s.window.hi + c)
    return WindowedSet(window, s.bits)


def negate(s: WindowedSet) -> WindowedSet:
    window = IntegerWindow(-s.window.hi, -s.window.lo)
    return WindowedSet(window, s.bits[::-1])


def _aligned(a: WindowedSet, b: WindowedSet) -> tuple[IntegerWindow, np.ndarray, np.ndarray]:
    window = a.window.hull(b.window)
    return window, a.rewindow(window).bits, b.rewindow(window).bits


def union(a: WindowedSet, b: WindowedSet) -> WindowedSet:
    window, x, y = _aligned(a, b)
    return WindowedSet(window, x | y)


def intersect(a: WindowedSet, b: WindowedSet) -> WindowedSet:
    window, x, y = _aligned(a, b)
    return WindowedSet(window, x & y)


def difference(a: WindowedSet, b: WindowedSet) -> WindowedSet:
    window, x, y = _aligned(a, b)
    return WindowedSet(window, x & ~y)


def is_subset(a: WindowedSet, b: WindowedSet) -> bool:
    _, x, y = _aligned(a, b)
    return not (x & ~y).any()


# ---------------------------------------------------------------------------
# Halves and quarters
# ---------------------------------------------------------------------------

def part_bounds(a: int, b: int, which: str) -> tuple[int, int]:
    """Bounds of a half or quarter of {a..b}.

    Halves need an even length, quarters a length divisible by 4.
    """
    length = b - a + 1
    if which not in PARTS:
        raise PreconditionError(f"unknown part {which!r}, expected one of {PARTS}")
    if which.endswith("half"):
        if length <= 0 or length % 2:
            raise PreconditionError(f"interval {a}..{b} has no halves (length {length})")
        h = length // 2
        return (a, a + h - 1) if which == "left-half" else (a + h, b)
    if length <= 0 or length % 4:
        raise PreconditionError(f"interval {a}..{b} has no quarters (length {length})")
    q = length // 4
    i = int(which[1]) - 1
    return a + i * q, a + (i + 1) * q - 1


def half_or_quarter(s: WindowedSet, which: str) -> WindowedSet:
    """The requested half or quarter of a contiguous interval set, on s's window."""
    xs = s.as_array()
    if xs.size == 0 or xs[-1] - xs[0] + 1 != xs.size:
        raise PreconditionError("half_or_quarter needs a non-empty contiguous interval")
    lo, hi = part_bounds(int(xs[0]), int(xs[-1]), which)
    return interval(lo, hi).rewindow(s.window)


# ---------------------------------------------------------------------------
# Lattice sets
# ---------------------------------------------------------------------------

class LatticeSet:
    """Finite set of points in Z^d, strictly sorted, inside its window."""

    __slots__ = ("window", "members", "_index")

    def __init__(self, window: LatticeWindow, members: Iterable[Sequence[int]]):
        pts = sorted({tuple(int(c) for c in p) for p in members})
        for p in pts:
            if not window.contains(p):
                raise PreconditionError(f"point {p} outside box {window}")
        object.__setattr__(self, "window", window)
        object.__setattr__(self, "members", tuple(pts))
        object.__setattr__(self, "_index", frozenset(pts))

    def __setattr__(self, name, value):
        raise AttributeError("LatticeSet is immutable")

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], window: LatticeWindow,
                    clip: bool = False) -> "LatticeSet":
        if clip:
            points = [p for p in points if window.contains(p)]
        return cls(window, points)

    @classmethod
    def from_array(cls, arr: np.ndarray, window: LatticeWindow, clip: bool = False) -> "LatticeSet":
        return cls.from_points((tuple(row) for row in np.asarray(arr).tolist()), window, clip=clip)

    @classmethod
    def product(cls, factors: Sequence[WindowedSet]) -> "LatticeSet":
        window = LatticeWindow(tuple(f.window for f in factors))
        return cls(window, itertools.product(*(f.elements() for f in factors)))

    @property
    def d(self) -> int:
        return self.window.d

    def as_array(self) -> np.ndarray:
        if not self.members:
            return np.zeros((0, self.d), dtype=np.int64)
        return np.array(self.members, dtype=np.int64)

    def to_mask(self) -> np.ndarray:
        mask = np.zeros(self.window.shape, dtype=bool)
        if self.members:
            idx = self.as_array() - self.window.origin
            mask[tuple(idx.T)] = True
        return mask

    def __contains__(self, point) -> bool:
        return tuple(int(c) for c in point) in self._index

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeSet):
            return NotImplemented
        return self.window == other.window and self.members == other.members

    def __hash__(self) -> int:
        return hash((self.window, self.members))

    def __repr__(self) -> str:
        return f"LatticeSet([{self.window}], {len(self.members)} points)"
