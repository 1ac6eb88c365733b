"""Co-minimal pairs in Z^d: product lifting, the corollary pairs, automorphism builders, quadrant pairs."""

import functools
import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from constructions import (
    S_FAMILY,
    T_FAMILY,
    U_FAMILY,
    V_FAMILY,
    FamilySpec,
    gen_W_greedy,
    materialize,
)
from errors import ConstructionError, PreconditionError
from refinement import refine_greedy
from sumset_engine import sumset_lattice
from verifiers import CERT_WINDOW
from window_core import IntegerWindow, LatticeSet, LatticeWindow, WindowedSet, negate

logger = logging.getLogger(__name__)

# Dense masks above this many cells are refused.
DENSE_LIMIT = 50_000_000
# Infinite families are materialized this many times past the box they must cover.
FAMILY_REACH = 16
MAX_CANDIDATES = 4096


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix with determinant +1 or -1."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise PreconditionError(f"matrix must be square and non-empty, got {self.entries!r}")
        object.__setattr__(self, "entries", rows)
        if abs(self.det) != 1:
            raise PreconditionError(f"matrix {rows} has determinant {self.det}, not +-1")

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        try:
            return cls(json.loads(text))
        except (json.JSONDecodeError, TypeError, ValueError) as e:
            raise PreconditionError(f"bad matrix {text!r}: {e}") from e

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return int(round(np.linalg.det(self.as_array())))

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def block(self, start: int, size: int) -> "IntMatrix":
        return IntMatrix(tuple(row[start:start + size] for row in self.entries[start:start + size]))

    def __str__(self) -> str:
        return json.dumps([list(row) for row in self.entries])


def is_two_nonzero_gl2(M: IntMatrix) -> bool:
    """True for the eight 2x2 automorphisms with exactly two zero entries."""
    if M.n != 2:
        raise PreconditionError(f"expected a 2x2 matrix, got {M.n}x{M.n}")
    return sum(v == 0 for row in M.entries for v in row) == 2


def apply_matrix(M: IntMatrix, X: LatticeSet) -> LatticeSet:
    """M applied pointwise; the result lives on the bounding box of M's image of X's box."""
    if M.n != X.d:
        raise PreconditionError(f"{M.n}x{M.n} matrix on a {X.d}-dimensional set")
    arr = M.as_array()
    corners = np.array(list(itertools.product(*((w.lo, w.hi) for w in X.window.dims))), dtype=np.int64)
    image = corners @ arr.T
    window = LatticeWindow(tuple(IntegerWindow(int(lo), int(hi))
                                 for lo, hi in zip(image.min(axis=0), image.max(axis=0))))
    return LatticeSet.from_array(X.as_array() @ arr.T, window)


@dataclass(frozen=True)
class BlockTriangularSpec:
    """A block upper triangular matrix split into 1x1 and 2x2 diagonal blocks.

    1x1 blocks are +-1. 2x2 blocks are the antidiagonal members of the
    eight-matrix set; diagonal 2x2 blocks are split into two 1x1 blocks.
    """

    matrix: IntMatrix
    blocks: tuple = field(default=())

    @classmethod
    def from_matrix(cls, M: IntMatrix) -> "BlockTriangularSpec":
        arr = M.as_array()
        blocks, i = [], 0
        while i < M.n:
            size = 2 if i + 1 < M.n and arr[i + 1, i] != 0 else 1
            if arr[i + size:, i:i + size].any():
                raise PreconditionError(f"{M} is not block upper triangular with blocks of size <= 2")
            if size == 1 and abs(arr[i, i]) != 1:
                raise PreconditionError(f"unsupported 1x1 block {arr[i, i]} at {i}")
            if size == 2 and not is_two_nonzero_gl2(M.block(i, 2)):
                raise PreconditionError(f"unsupported 2x2 block {M.block(i, 2)} at {i}")
            blocks.append((i, size))
            i += size
        return cls(matrix=M, blocks=tuple(blocks))

    def block_matrices(self) -> list[IntMatrix]:
        return [self.matrix.block(start, size) for start, size in self.blocks]


# ---------------------------------------------------------------------------
# Pair reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticePairReport:
    A: LatticeSet
    B: LatticeSet
    box: LatticeWindow
    coverage_ok: bool
    witnesses: dict = field(default_factory=dict)
    partner_witnesses: dict = field(default_factory=dict)
    certification: str = CERT_WINDOW
    first_uncovered: tuple | None = None
    matrix: IntMatrix | None = None

    @property
    def unverified(self) -> list[tuple]:
        return ([p for p, y in self.witnesses.items() if y is None]
                + [p for p, y in self.partner_witnesses.items() if y is None])

    @property
    def passed(self) -> bool:
        return self.coverage_ok and not self.unverified


def _check_dense(X: LatticeSet) -> None:
    cells = int(np.prod(X.window.shape, dtype=np.int64))
    if cells > DENSE_LIMIT:
        raise PreconditionError(f"box {X.window} has {cells} cells, above the dense limit {DENSE_LIMIT}")


class _RepCounter:
    """Counts pairs (a, b) in A x B with a + b = y by mask lookups over the larger set."""

    def __init__(self, A: LatticeSet, B: LatticeSet):
        small, large = (A, B) if len(A) <= len(B) else (B, A)
        self.points = small.as_array()
        self.mask = large.to_mask()
        self.origin = large.window.origin
        self.shape = np.array(large.window.shape)

    def count(self, y: np.ndarray) -> int:
        idx = y - self.points - self.origin
        inside = np.all((idx >= 0) & (idx < self.shape), axis=1)
        if not inside.any():
            return 0
        return int(self.mask[tuple(idx[inside].T)].sum())


def _by_norm(cands: np.ndarray) -> np.ndarray:
    norms = np.abs(cands).max(axis=1)
    keys = tuple(cands[:, i] for i in reversed(range(cands.shape[1]))) + (norms,)
    return cands[np.lexsort(keys)]


def _first_unique(counter: _RepCounter, cands: np.ndarray, max_candidates: int) -> tuple | None:
    for y in _by_norm(cands)[:max_candidates]:
        if counter.count(y) == 1:
            return tuple(int(v) for v in y)
    return None


def verify_cominimal_lattice(A: LatticeSet, B: LatticeSet, box: LatticeWindow,
                             max_candidates: int = MAX_CANDIDATES, workers: int = 1) -> LatticePairReport:
    """Window check of co-minimality on the middle half of box.

    Coverage: every point of the middle half lies in A + B. Minimality: each
    element of A (and of B) in the middle half has a target a + b whose only
    representation uses it. Representations are counted over the sets as
    given, so the verdict is window-only.
    """
    if A.d != B.d or A.d != box.d:
        raise PreconditionError(f"dimension mismatch: {A.d}, {B.d}, box {box.d}")
    _check_dense(A)
    _check_dense(B)
    mid = box.middle_half()

    cover = sumset_lattice(A, B, mid).to_mask()
    missing = np.argwhere(~cover)
    first_uncovered = tuple(int(v) for v in missing[0] + mid.origin) if missing.size else None

    counter = _RepCounter(A, B)
    A_arr, B_arr = A.as_array(), B.as_array()

    def witness_for_a(a: tuple) -> tuple[tuple, tuple | None]:
        return a, _first_unique(counter, np.array(a) + B_arr, max_candidates)

    def witness_for_b(b: tuple) -> tuple[tuple, tuple | None]:
        return b, _first_unique(counter, A_arr + np.array(b), max_candidates)

    a_pts = [p for p in A if mid.contains(p)]
    b_pts = [p for p in B if mid.contains(p)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            witnesses = dict(pool.map(witness_for_a, a_pts))
            partner_witnesses = dict(pool.map(witness_for_b, b_pts))
    else:
        witnesses = dict(map(witness_for_a, a_pts))
        partner_witnesses = dict(map(witness_for_b, b_pts))

    report = LatticePairReport(
        A=A, B=B, box=box,
        coverage_ok=first_uncovered is None,
        witnesses=witnesses,
        partner_witnesses=partner_witnesses,
        first_uncovered=first_uncovered,
    )
    logger.debug(f"Lattice pair on {box}: coverage {'ok' if report.coverage_ok else 'fails'}, "
                 f"{len(report.unverified)} elements without witness")
    return report


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

def product_pair(A: WindowedSet, B: WindowedSet, C: LatticeSet, D: LatticeSet,
                 axis: int = 0) -> tuple[LatticeSet, LatticeSet]:
    """(A + C, B + D) with A and B embedded along `axis`.

    C and D must map injectively to the quotient by that axis, i.e. no two
    of their points agree off the axis.
    """
    if C.d != D.d or not 0 <= axis < C.d:
        raise PreconditionError(f"axis {axis} invalid for dimensions {C.d}, {D.d}")

    def lift(X: WindowedSet, Y: LatticeSet) -> LatticeSet:
        off_axis = [tuple(p[:axis] + p[axis + 1:]) for p in Y]
        if len(set(off_axis)) != len(off_axis):
            raise PreconditionError(f"{Y} does not map injectively to the quotient by axis {axis}")
        dims = list(Y.window.dims)
        dims[axis] = IntegerWindow(X.window.lo + dims[axis].lo, X.window.hi + dims[axis].hi)
        pts = Y.as_array()
        xs = X.as_array()
        if not len(xs) or not len(pts):
            return LatticeSet(LatticeWindow(tuple(dims)), ())
        out = np.repeat(pts, len(xs), axis=0)
        out[:, axis] += np.tile(xs, len(pts))
        return LatticeSet.from_array(out, LatticeWindow(tuple(dims)))

    return lift(A, C), lift(B, D)


def lift_pair(first: tuple[LatticeSet, LatticeSet],
              second: tuple[LatticeSet, LatticeSet]) -> tuple[LatticeSet, LatticeSet]:
    """Concatenate coordinates: (A x C, B x D) for a block diagonal step."""
    (A, B), (C, D) = first, second

    def concat(X: LatticeSet, Y: LatticeSet) -> LatticeSet:
        window = LatticeWindow(X.window.dims + Y.window.dims)
        return LatticeSet(window, (p + q for p in X for q in Y))

    return concat(A, C), concat(B, D)


def _clip(X: LatticeSet, box: LatticeWindow) -> LatticeSet:
    return LatticeSet.from_points(X, box, clip=True)


def combine_reports(reports: Sequence[LatticePairReport], box: LatticeWindow) -> LatticePairReport:
    """Block diagonal product of per-block reports, with sets clipped to box.

    Witnesses concatenate: a point's witness is the tuple of its blocks' witnesses.
    """
    offsets = list(itertools.accumulate((r.box.d for r in reports), initial=0))
    if offsets[-1] != box.d:
        raise PreconditionError(f"reports span {offsets[-1]} axes, box has {box.d}")
    subs = [LatticeWindow(box.dims[lo:hi]) for lo, hi in zip(offsets, offsets[1:])]

    pair = None
    for r, sub in zip(reports, subs):
        step = (_clip(r.A, sub), _clip(r.B, sub))
        pair = step if pair is None else lift_pair(pair, step)
    A, B = pair

    def joined(maps: list[dict], points: LatticeSet) -> dict:
        mid = box.middle_half()
        out = {}
        for p in points:
            if not mid.contains(p):
                continue
            parts = [m.get(p[lo:hi]) for m, lo, hi in zip(maps, offsets, offsets[1:])]
            out[p] = None if any(x is None for x in parts) else sum(parts, ())
        return out

    uncovered = next((r.first_uncovered for r in reports if r.first_uncovered is not None), None)
    return LatticePairReport(
        A=A, B=B, box=box,
        coverage_ok=all(r.coverage_ok for r in reports),
        witnesses=joined([r.witnesses for r in reports], A),
        partner_witnesses=joined([r.partner_witnesses for r in reports], B),
        first_uncovered=uncovered,
    )


# ---------------------------------------------------------------------------
# Refined families on windows
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=8)
def refined_family(root: str, radius: int) -> FamilySpec:
    """S or U refined over every element with |x| <= radius."""
    base, partner = (S_FAMILY, T_FAMILY) if root == "S" else (U_FAMILY, V_FAMILY)
    w = IntegerWindow(-radius, radius)
    budget = len(materialize(base, IntegerWindow(-radius, -1)))
    return refine_greedy(base, partner, budget, w).as_family()


def _axis_set(name: str, radius: int, box_radius: int) -> WindowedSet:
    w = IntegerWindow(-radius, radius)
    if name == "W":
        return gen_W_greedy(w)
    if name in ("S", "-S"):
        s = materialize(refined_family("S", box_radius), w)
        return negate(s) if name == "-S" else s
    if name == "U":
        return materialize(refined_family("U", box_radius), w)
    return materialize({"T": T_FAMILY, "V": V_FAMILY}[name], w)


# Axis families for the antidiagonal blocks; every sign-diagonal axis uses W.
_ANTIDIAGONAL_SETS = {
    ((0, 1), (1, 0)): ("S", "T"),
    ((0, -1), (1, 0)): ("V", "U"),
    ((0, 1), (-1, 0)): ("U", "V"),
    ((0, -1), (-1, 0)): ("-S", "T"),
}


def _axis_plan(spec: BlockTriangularSpec, box: LatticeWindow) -> list[tuple[str, int]]:
    """(family name, materialization radius) per axis, from the last block up.

    An axis must absorb the shear from later axes, so its covering radius is
    the box radius plus |M_ij| times every later axis radius.
    """
    arr = spec.matrix.as_array()
    radii = [max(abs(w.lo), abs(w.hi)) for w in box.dims]
    plan: list[tuple[str, int] | None] = [None] * spec.matrix.n
    for start, size in reversed(spec.blocks):
        axes = range(start, start + size)
        later = range(start + size, spec.matrix.n)
        c = max(radii[i] + sum(abs(int(arr[i, j])) * plan[j][1] for j in later) for i in axes)
        if size == 1:
            plan[start] = ("W", 2 * c)
        else:
            names = _ANTIDIAGONAL_SETS[spec.matrix.block(start, 2).entries]
            for i, name in zip(axes, names):
                plan[i] = (name, FAMILY_REACH * c)
    return plan


def build_A_for_automorphism(spec: BlockTriangularSpec, box: LatticeWindow) -> LatticeSet:
    """A with (A, M(A)) co-minimal, materialized wide enough to cover box's middle half."""
    if spec.matrix.n != box.d:
        raise PreconditionError(f"{spec.matrix.n}x{spec.matrix.n} matrix on a {box.d}-dimensional box")
    box_radius = max(max(abs(w.lo), abs(w.hi)) for w in box.dims)
    factors = [_axis_set(name, radius, box_radius) for name, radius in _axis_plan(spec, box)]
    return LatticeSet.product(factors)


def automorphism_report(M: IntMatrix, box: LatticeWindow, workers: int = 1) -> LatticePairReport:
    spec = BlockTriangularSpec.from_matrix(M)
    A = build_A_for_automorphism(spec, box)
    B = apply_matrix(M, A)
    report = verify_cominimal_lattice(A, B, box, workers=workers)
    logger.info(f"Matrix {M} on {box}: {'passed' if report.passed else 'failed'}")
    return replace(report, matrix=M)


# ---------------------------------------------------------------------------
# Corollary pairs and quadrants
# ---------------------------------------------------------------------------

def corollary_pairs(x_seq: Sequence[int] | None, y_seq: Sequence[int] | None, w: LatticeWindow,
                    reach: int = FAMILY_REACH) -> list[tuple[LatticeSet, LatticeSet]]:
    """The two shifted product pairs built from the refined S and the powers of two.

    With s_1, s_2, ... the refined S by increasing |s|, the pairs are
    {(x_i + s_j, s_i)} against {(y_u + 2^(v-1), 2^(u-1))}, and
    {(x_i + 2^(j-1), s_i)} against {(y_u + s_v, 2^(u-1))}. Both are clipped
    to w widened `reach` times, so that w's middle half is covered.
    """
    if w.d != 2:
        raise PreconditionError(f"corollary pairs live in Z^2, got a {w.d}-dimensional box")
    h = max(max(abs(d.lo), abs(d.hi)) for d in w.dims)
    r = reach * h
    S = materialize(refined_family("S", h), IntegerWindow(-r, r))
    T = materialize(T_FAMILY, IntegerWindow(-r, r))
    s_seq = sorted(S.elements(), key=abs)
    t_seq = T.elements()

    xs = [0] * len(s_seq) if x_seq is None else list(x_seq)
    ys = [0] * len(t_seq) if y_seq is None else list(y_seq)
    if len(xs) < len(s_seq) or len(ys) < len(t_seq):
        raise PreconditionError(f"sequences need {len(s_seq)} and {len(t_seq)} terms, "
                                f"got {len(xs)} and {len(ys)}")

    def points_box(points: list[tuple[int, int]]) -> LatticeSet:
        lo = np.min(points, axis=0)
        hi = np.max(points, axis=0)
        return LatticeSet(LatticeWindow((IntegerWindow(int(lo[0]), int(hi[0])),
                                         IntegerWindow(int(lo[1]), int(hi[1])))), points)

    C = points_box([(x, s) for x, s in zip(xs, s_seq)])
    D = points_box([(y, t) for y, t in zip(ys, t_seq)])
    target = LatticeWindow.cube(-r, r, 2)
    out = []
    for first, second in ((S, T), (T, S)):
        A, B = product_pair(first, second, C, D, axis=0)
        out.append((_clip(A, target), _clip(B, target)))
    return out


def is_in_quadrant(X: LatticeSet) -> bool:
    """Every axis has all coordinates of one strict sign."""
    if not len(X):
        raise PreconditionError("quadrant test needs a non-empty set")
    arr = X.as_array()
    return bool(np.all(np.all(arr > 0, axis=0) | np.all(arr < 0, axis=0)))


def build_quadrant_pair(d: int, w: LatticeWindow, workers: int = 1) -> LatticePairReport:
    """A inside the positive quadrant of Z^(2d) with (A, M(A)) co-minimal.

    M is block diagonal with d copies of [[0,-1],[-1,0]], so A is the
    d-fold product of (-S) x T.
    """
    if d < 1 or w.d != 2 * d:
        raise PreconditionError(f"quadrant pair of rank {d} needs a {2 * d}-dimensional box, got {w.d}")
    M = IntMatrix(((0, -1), (-1, 0)))
    reports = [automorphism_report(M, LatticeWindow(w.dims[2 * k:2 * k + 2]), workers) for k in range(d)]
    report = combine_reports(reports, w)
    if not is_in_quadrant(report.A):
        raise ConstructionError(f"quadrant construction left the quadrant on {w}")
    return report
