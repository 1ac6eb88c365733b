"""Generators and exact membership oracles for the structured sets J_n, K_n, I_n, U_n, S, T, U, V and W."""

import functools
import itertools
import json
import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from errors import ConstructionError, PreconditionError, StabilizationError
from window_core import IntegerWindow, LatticeSet, LatticeWindow, WindowedSet

logger = logging.getLogger(__name__)

INDEXED_KINDS = ("J", "K", "I", "script_I")
INFINITE_ROOTS = ("S", "U")
KINDS = INDEXED_KINDS + (
    "S", "T", "U", "V", "W", "script_S", "script_U",
    "negated", "shift", "without", "finite", "product",
)
DEFAULT_TAIL_SPAN = 16


# ---------------------------------------------------------------------------
# Scalar recurrences
# ---------------------------------------------------------------------------

def _j_member(n: int, x: int) -> bool:
    # J_n = {1..2^(n-2)} U (2^(n-1) + J_(n-1)), J_0 = J_1 = {1}
    while n >= 2:
        if 1 <= x <= 1 << (n - 2):
            return True
        x -= 1 << (n - 1)
        n -= 1
    return x == 1


def _k_member(n: int, x: int) -> bool:
    if n <= 1:
        return x == 1
    if n == 2:
        return x == 3
    if (1 << (n - 3)) < x <= (1 << (n - 2)):
        return True
    return _j_member(n - 2, x - 3 * (1 << (n - 2)))


def _i_member(n: int, x: int) -> bool:
    return _k_member(n, x + 1 + (1 << (n + 1)))


def _u_member(n: int, x: int) -> bool:
    if n == 0:
        return x in (-2, -1)
    if n in (1, 2):
        return False
    z = x + 1 + (1 << (n + 1))
    if n == 3:
        return z == 6
    if n == 4:
        return z in (3, 4, 14)
    base = 3 * (1 << (n - 2))
    return (1 << (n - 3)) < z <= (1 << (n - 2)) or base < z <= base + (1 << (n - 4))


def _script_i_bounds(n: int) -> tuple[int, int]:
    if n == 0:
        return -2, -1
    return -(1 << (n + 1)), -(1 << n) - 1


def block_index(x: int) -> int | None:
    """The unique m with x in script_I_m, or None for x >= 0."""
    if x >= 0:
        return None
    if x >= -2:
        return 0
    return (-x - 1).bit_length() - 1


def in_block(root: str, m: int, x: int) -> bool:
    """x in I_m (root S) or x in U_m (root U)."""
    return _i_member(m, x) if root == "S" else _u_member(m, x)


@functools.lru_cache(maxsize=1 << 18)
def _s_member(x: int) -> bool:
    m = block_index(x)
    return m is not None and _i_member(m, x)


@functools.lru_cache(maxsize=1 << 18)
def _u_union_member(x: int) -> bool:
    m = block_index(x)
    return m is not None and _u_member(m, x)


# ---------------------------------------------------------------------------
# Vectorized recurrences
# ---------------------------------------------------------------------------

def _in_J(n: int, xs: np.ndarray) -> np.ndarray:
    xs = np.array(xs, dtype=np.int64)
    hit = np.zeros(xs.shape, dtype=bool)
    alive = np.ones(xs.shape, dtype=bool)
    while n >= 2:
        low = alive & (xs >= 1) & (xs <= 1 << (n - 2))
        hit |= low
        alive &= ~low
        xs -= 1 << (n - 1)
        n -= 1
    return hit | (alive & (xs == 1))


def _in_K(n: int, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    if n <= 1:
        return xs == 1
    if n == 2:
        return xs == 3
    low = (xs > 1 << (n - 3)) & (xs <= 1 << (n - 2))
    return low | _in_J(n - 2, xs - 3 * (1 << (n - 2)))


def _in_I(n: int, xs: np.ndarray) -> np.ndarray:
    return _in_K(n, np.asarray(xs, dtype=np.int64) + 1 + (1 << (n + 1)))


def _in_U(n: int, xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    if n == 0:
        return (xs == -2) | (xs == -1)
    if n in (1, 2):
        return np.zeros(xs.shape, dtype=bool)
    z = xs + 1 + (1 << (n + 1))
    if n == 3:
        return z == 6
    if n == 4:
        return np.isin(z, (3, 4, 14))
    base = 3 * (1 << (n - 2))
    first = (z > 1 << (n - 3)) & (z <= 1 << (n - 2))
    return first | ((z > base) & (z <= base + (1 << (n - 4))))


def block_index_array(xs: np.ndarray) -> np.ndarray:
    """Vectorized block_index; -1 marks x >= 0."""
    xs = np.asarray(xs, dtype=np.int64)
    deep = xs <= -3
    v = np.where(deep, -xs - 1, 1)
    m = np.zeros(xs.shape, dtype=np.int64)
    for step in (32, 16, 8, 4, 2, 1):
        big = v >= (1 << step)
        m[big] += step
        v[big] = v[big] >> step
    m = np.where(deep, m, 0)
    return np.where(xs >= 0, -1, m)


def _blockwise(xs: np.ndarray, in_block) -> np.ndarray:
    blocks = block_index_array(xs)
    out = np.zeros(xs.shape, dtype=bool)
    for m in np.unique(blocks[blocks >= 0]):
        sel = blocks == m
        out[sel] = in_block(int(m), xs[sel])
    return out


def _is_power_of_two(xs: np.ndarray) -> np.ndarray:
    return (xs >= 1) & ((xs & (xs - 1)) == 0)


# ---------------------------------------------------------------------------
# Finite generators
# ---------------------------------------------------------------------------

def _from_mask(window: IntegerWindow, mask: np.ndarray) -> WindowedSet:
    return WindowedSet(window, mask)


def _check_index(n: int) -> None:
    if n < 0:
        raise PreconditionError(f"index must be >= 0, got {n}")


def gen_J(n: int) -> WindowedSet:
    _check_index(n)
    window = IntegerWindow(1, max(1, (1 << n) - 1))
    return _from_mask(window, _in_J(n, window.arange()))


def gen_K(n: int) -> WindowedSet:
    _check_index(n)
    window = IntegerWindow(1, max(3, (1 << n) - 1))
    return _from_mask(window, _in_K(n, window.arange()))


def gen_script_I(n: int) -> WindowedSet:
    _check_index(n)
    lo, hi = _script_i_bounds(n)
    window = IntegerWindow(lo, hi)
    return WindowedSet(window, np.ones(window.width, dtype=bool))


def gen_I(n: int) -> WindowedSet:
    _check_index(n)
    window = gen_script_I(n).window
    return _from_mask(window, _in_I(n, window.arange()))


def gen_U(n: int) -> WindowedSet:
    _check_index(n)
    window = gen_script_I(n).window
    return _from_mask(window, _in_U(n, window.arange()))


# ---------------------------------------------------------------------------
# Greedy 3AP-free W
# ---------------------------------------------------------------------------

def _closes_progression(members: set[int], z: int) -> bool:
    for b in members:
        a = 2 * b - z
        if a != z and a in members:
            return True
        c = 2 * z - b
        if c != b and c in members:
            return True
    return False


@functools.lru_cache(maxsize=32)
def gen_W_greedy(w: IntegerWindow) -> WindowedSet:
    """Symmetric 3AP-free set inside w whose sumset covers w's middle half.

    Scans x = 1, 2, ... and adds the pair {x, -x} when the result stays
    3AP-free and some new sum lands on an uncovered target.
    """
    if w.lo != -w.hi or w.width < 8:
        raise PreconditionError(f"W needs a symmetric window of width >= 8, got {w}")
    target = w.middle_half()
    covered = np.zeros(target.width, dtype=bool)
    members: set[int] = set()

    for x in range(1, w.hi + 1):
        if covered.all():
            break
        trial = set(members)
        free = True
        for z in (x, -x):
            if _closes_progression(trial, z):
                free = False
                break
            trial.add(z)
        if not free:
            continue
        sums = np.array([a + b for a in (x, -x) for b in trial], dtype=np.int64)
        sums = sums[(sums >= target.lo) & (sums <= target.hi)] - target.lo
        if covered[sums].all():
            continue
        members = trial
        covered[sums] = True

    if not covered.all():
        missing = int(np.flatnonzero(~covered)[0]) + target.lo
        raise ConstructionError(f"greedy W on {w} leaves {missing} uncovered")
    logger.debug(f"W on {w}: {len(members)} elements")
    return WindowedSet.from_elements(sorted(members), w)


# ---------------------------------------------------------------------------
# Family handles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    """Symbolic handle to one structured set, finite or infinite.

    `U` without `n` is the union of all U_n. `script_S` and `script_U` are
    refined prefixes: the base family minus the elements a refinement removed
    within its budget.
    """

    kind: str
    n: int | None = None
    c: int = 0
    base: "FamilySpec | None" = None
    removed: frozenset = frozenset()
    elements: frozenset = frozenset()
    factors: tuple = ()
    window: IntegerWindow | None = None
    budget: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown family kind {self.kind!r}")
        if self.kind in INDEXED_KINDS and self.n is None:
            raise PreconditionError(f"family {self.kind} needs an index n")
        if self.n is not None and self.n < 0:
            raise PreconditionError(f"family index must be >= 0, got {self.n}")
        if self.kind in ("negated", "shift", "without") and self.base is None:
            raise PreconditionError(f"family {self.kind} needs a base family")
        if self.kind == "W" and self.window is None:
            raise PreconditionError("family W needs a window")
        if self.kind == "product" and not self.factors:
            raise PreconditionError("family product needs factors")

    def __str__(self) -> str:
        if self.kind in INDEXED_KINDS or (self.kind == "U" and self.n is not None):
            return f"{self.kind}:{self.n}"
        if self.kind == "W":
            return f"W:{self.window}"
        if self.kind == "shift":
            return f"({self.base}){self.c:+d}"
        if self.kind == "negated":
            return f"-({self.base})"
        if self.kind == "without":
            return f"{self.base}\\{{{len(self.removed)} elements}}"
        if self.kind == "product":
            return " x ".join(str(f) for f in self.factors)
        if self.kind == "finite":
            return f"finite({len(self.elements)})"
        return self.kind

    @property
    def dimension(self) -> int:
        return len(self.factors) if self.kind == "product" else 1

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.n is not None:
            out["n"] = self.n
        if self.kind == "shift":
            out["c"] = self.c
        if self.base is not None:
            out["base"] = self.base.to_dict()
        if self.removed:
            out["removed"] = sorted(self.removed)
        if self.kind == "finite":
            out["elements"] = sorted(self.elements)
        if self.factors:
            out["factors"] = [f.to_dict() for f in self.factors]
        if self.window is not None:
            out["window"] = [self.window.lo, self.window.hi]
        if self.budget is not None:
            out["budget"] = self.budget
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "FamilySpec":
        try:
            kind = {"shifted": "shift", "negate": "negated"}.get(data["kind"], data["kind"])
            window = data.get("window")
            return cls(
                kind=kind,
                n=data.get("n"),
                c=int(data.get("c", 0)),
                base=cls.from_dict(data["base"]) if "base" in data else None,
                removed=frozenset(int(x) for x in data.get("removed", ())),
                elements=frozenset(int(x) for x in data.get("elements", ())),
                factors=tuple(cls.from_dict(f) for f in data.get("factors", ())),
                window=IntegerWindow(*window) if window is not None else None,
                budget=data.get("budget"),
            )
        except (KeyError, TypeError) as e:
            raise PreconditionError(f"malformed family spec {data!r}: {e}") from e


S_FAMILY = FamilySpec("S")
T_FAMILY = FamilySpec("T")
U_FAMILY = FamilySpec("U")
V_FAMILY = FamilySpec("V")


def shifted(f: FamilySpec, c: int) -> FamilySpec:
    return FamilySpec("shift", base=f, c=c)


def negated(f: FamilySpec) -> FamilySpec:
    return FamilySpec("negated", base=f)


def without(f: FamilySpec, removed) -> FamilySpec:
    """f minus a finite set; nested removals are flattened."""
    removed = frozenset(int(x) for x in removed)
    if f.kind == "without":
        return FamilySpec("without", base=f.base, removed=f.removed | removed)
    if f.kind in ("script_S", "script_U"):
        return FamilySpec(f.kind, removed=f.removed | removed, budget=f.budget)
    return FamilySpec("without", base=f, removed=removed)


def finite(xs) -> FamilySpec:
    return FamilySpec("finite", elements=frozenset(int(x) for x in xs))


def w_family(window: IntegerWindow) -> FamilySpec:
    return FamilySpec("W", window=window)


def product(*factors: FamilySpec) -> FamilySpec:
    return FamilySpec("product", factors=tuple(factors))


def parse_family(text: str) -> FamilySpec:
    """Parse a FamilySpec from JSON or shorthand (S, T, U, V, I:3, U:5, W:-64..64)."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return FamilySpec.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise PreconditionError(f"bad family JSON: {e}") from e
    if text in ("S", "T", "U", "V"):
        return FamilySpec(text)
    kind, sep, arg = text.partition(":")
    if not sep:
        raise PreconditionError(f"unknown family shorthand {text!r}")
    if kind == "W":
        return w_family(IntegerWindow.parse(arg))
    if kind in INDEXED_KINDS + ("U",):
        try:
            return FamilySpec(kind, n=int(arg))
        except ValueError:
            raise PreconditionError(f"bad index in {text!r}") from None
    raise PreconditionError(f"unknown family shorthand {text!r}")


def root_kind(f: FamilySpec) -> str:
    """S or U for families derived from them by removal, else "finite" or the kind."""
    if f.kind == "without":
        return root_kind(f.base)
    if f.kind == "script_S":
        return "S"
    if f.kind == "script_U":
        return "U"
    if f.kind in ("S", "T", "V") or (f.kind == "U" and f.n is None):
        return f.kind
    if is_finite(f):
        return "finite"
    return f.kind


def is_finite(f: FamilySpec) -> bool:
    if f.kind in INDEXED_KINDS + ("W", "finite"):
        return True
    if f.kind == "U":
        return f.n is not None
    if f.kind in ("negated", "shift", "without"):
        return is_finite(f.base)
    return False


def max_abs(f: FamilySpec) -> int:
    """Largest |x| over a finite family."""
    if f.kind in ("J", "K"):
        return max(3, (1 << f.n) - 1)
    if f.kind in ("I", "script_I", "U"):
        return 1 << (f.n + 1)
    if f.kind == "W":
        return max(abs(f.window.lo), abs(f.window.hi))
    if f.kind == "finite":
        return max((abs(x) for x in f.elements), default=0)
    if f.kind == "shift":
        return max_abs(f.base) + abs(f.c)
    if f.kind in ("negated", "without"):
        return max_abs(f.base)
    raise PreconditionError(f"family {f} is infinite")


def removed_elements(f: FamilySpec) -> frozenset:
    if f.kind in ("without", "script_S", "script_U"):
        inner = removed_elements(f.base) if f.base is not None else frozenset()
        return f.removed | inner
    return frozenset()


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

def member(f: FamilySpec, x) -> bool:
    """Exact membership; x is an integer, or a tuple for product families."""
    kind = f.kind
    if kind == "product":
        return len(x) == len(f.factors) and all(member(g, xi) for g, xi in zip(f.factors, x))
    x = int(x)
    if kind == "J":
        return _j_member(f.n, x)
    if kind == "K":
        return _k_member(f.n, x)
    if kind == "I":
        return _i_member(f.n, x)
    if kind == "script_I":
        lo, hi = _script_i_bounds(f.n)
        return lo <= x <= hi
    if kind == "U":
        return _u_member(f.n, x) if f.n is not None else _u_union_member(x)
    if kind == "S":
        return _s_member(x)
    if kind == "script_S":
        return x not in f.removed and _s_member(x)
    if kind == "script_U":
        return x not in f.removed and _u_union_member(x)
    if kind == "T":
        return x >= 1 and x & (x - 1) == 0
    if kind == "V":
        return x != 0 and abs(x) & (abs(x) - 1) == 0
    if kind == "W":
        return x in gen_W_greedy(f.window)
    if kind == "finite":
        return x in f.elements
    if kind == "negated":
        return member(f.base, -x)
    if kind == "shift":
        return member(f.base, x - f.c)
    if kind == "without":
        return x not in f.removed and member(f.base, x)
    raise PreconditionError(f"no membership rule for {kind}")


def member_array(f: FamilySpec, xs) -> np.ndarray:
    """Vectorized membership over an integer array."""
    xs = np.asarray(xs, dtype=np.int64)
    kind = f.kind
    if kind == "J":
        return _in_J(f.n, xs)
    if kind == "K":
        return _in_K(f.n, xs)
    if kind == "I":
        return _in_I(f.n, xs)
    if kind == "script_I":
        lo, hi = _script_i_bounds(f.n)
        return (xs >= lo) & (xs <= hi)
    if kind == "U" and f.n is not None:
        return _in_U(f.n, xs)
    if kind in ("S", "script_S"):
        out = _blockwise(xs, _in_I)
    elif kind in ("U", "script_U"):
        out = _blockwise(xs, _in_U)
    elif kind == "T":
        return _is_power_of_two(xs)
    elif kind == "V":
        return _is_power_of_two(np.abs(xs))
    elif kind == "W":
        return np.isin(xs, gen_W_greedy(f.window).as_array())
    elif kind == "finite":
        return np.isin(xs, np.fromiter(f.elements, dtype=np.int64, count=len(f.elements)))
    elif kind == "negated":
        return member_array(f.base, -xs)
    elif kind == "shift":
        return member_array(f.base, xs - f.c)
    elif kind == "without":
        out = member_array(f.base, xs)
    else:
        raise PreconditionError(f"family {f} has no one-dimensional membership")
    if f.removed:
        out &= ~np.isin(xs, np.fromiter(f.removed, dtype=np.int64, count=len(f.removed)))
    return out


def materialize(f: FamilySpec, w: IntegerWindow) -> WindowedSet:
    """f intersected with w."""
    return WindowedSet(w, member_array(f, w.arange()))


def materialize_lattice(f: FamilySpec, box: LatticeWindow) -> LatticeSet:
    if f.kind != "product":
        raise PreconditionError(f"family {f} is not a product family")
    if len(f.factors) != box.d:
        raise PreconditionError(f"product of {len(f.factors)} factors on a {box.d}-dimensional box")
    return LatticeSet.product([materialize(g, w) for g, w in zip(f.factors, box.dims)])


def iter_by_magnitude(f: FamilySpec) -> Iterator[int]:
    """Elements of an S- or U-derived family by increasing |x|."""
    root = root_kind(f)
    if root not in INFINITE_ROOTS:
        raise PreconditionError(f"family {f} is not derived from S or U")
    gen = gen_I if root == "S" else gen_U
    for m in itertools.count():
        for x in reversed(gen(m).elements()):
            if member(f, x):
                yield x


# ---------------------------------------------------------------------------
# Tails
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailVerdict:
    k0: int
    value: bool
    checked_span: int


def _sign(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise PreconditionError(f"sign must be + or -, got {sign!r}")


def default_tail_start(f: FamilySpec, y: int) -> int:
    reach = max([abs(y)] + [abs(x) for x in removed_elements(f)])
    return reach.bit_length() + 4


def tail_membership(f: FamilySpec, y: int, sign="+", k0: int | None = None,
                    span: int = DEFAULT_TAIL_SPAN) -> TailVerdict:
    """Evaluate member(f, y - sign*2^k) for k in [k0, k0+span] and require a constant value.

    Raises:
        StabilizationError: the predicate changes on the span
    """
    if span < 8:
        raise PreconditionError(f"tail span must be >= 8, got {span}")
    s = _sign(sign)
    if k0 is None:
        k0 = default_tail_start(f, y)
    first = member(f, y - s * (1 << k0))
    for k in range(k0 + 1, k0 + span + 1):
        if member(f, y - s * (1 << k)) != first:
            raise StabilizationError(
                f"membership of {y} - {'+' if s > 0 else '-'}2^k in {f} changes at k={k}",
                first_change=k,
            )
    return TailVerdict(k0=k0, value=first, checked_span=span)
