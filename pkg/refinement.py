"""Greedy minimalization of S against T and of U against V."""

import itertools
import logging
from dataclasses import dataclass

from constructions import (
    DEFAULT_TAIL_SPAN,
    FamilySpec,
    iter_by_magnitude,
    member,
    root_kind,
    without,
)
from errors import PreconditionError, StabilizationError
from sumset_engine import is_power_family, min_horizon, powers, representations
from verifiers import CERT_TAIL, verify_complement_window
from window_core import IntegerWindow

logger = logging.getLogger(__name__)

DEFAULT_EXTRA = 12


@dataclass(frozen=True)
class RemovalRecord:
    """Why one element was dropped: every target in element + partner up to 2^horizon was re-checked."""
    element: int
    targets_checked: int
    horizon: int
    tail_span: int
    certification: str = CERT_TAIL


@dataclass(frozen=True)
class RefinementResult:
    base: FamilySpec
    partner: FamilySpec
    retained: tuple
    removed: tuple
    budget: int
    certification: str = CERT_TAIL
    flagged: tuple = ()
    coverage_holds: bool | None = None
    covered_window: IntegerWindow | None = None
    removals: tuple = ()

    def as_family(self) -> FamilySpec:
        """The refined prefix: base minus everything removed within the budget."""
        kind = "script_S" if root_kind(self.base) == "S" else "script_U"
        return FamilySpec(kind, removed=frozenset(self.removed), budget=self.budget)


def _target_covered(y: int, family: FamilySpec, partner: FamilySpec, horizon: int, span: int) -> bool:
    rep = representations(y, family, partner, max(horizon, min_horizon(y)), span=span)
    return bool(rep.pairs) or not rep.complete


def _check_removal(current: FamilySpec, s0: int, partner: FamilySpec, horizon: int,
                   span: int) -> tuple[bool, bool, int]:
    """(safe, inconclusive, targets checked) for dropping s0 from current.

    Removing s0 can only uncover targets in s0 + partner, so every such
    target with |v| <= 2^horizon is re-checked, then the next `span`
    exponents as a stabilized tail of targets.
    """
    reduced = without(current, {s0})
    checked = 0
    try:
        for v in powers(partner, horizon + span):
            checked += 1
            if not _target_covered(s0 + v, reduced, partner, horizon, span):
                logger.debug(f"{s0}: target {s0 + v} = {s0} + {v} loses its last representation")
                return False, False, checked
    except StabilizationError as e:
        logger.warning(f"{s0}: tail did not settle ({e}); keeping it")
        return False, True, checked
    return True, False, checked


def _horizon_for(s0: int, w: IntegerWindow, extra: int) -> int:
    return max(abs(s0).bit_length() + extra, max(abs(w.lo), abs(w.hi)).bit_length())


def removal_is_certified_safe(current: FamilySpec, s0: int, partner: FamilySpec, w: IntegerWindow,
                              extra: int = DEFAULT_EXTRA, span: int = DEFAULT_TAIL_SPAN) -> bool:
    """True only if current minus s0 is still a complement of partner.

    An inconclusive tail counts as unsafe.
    """
    if not member(current, s0):
        raise PreconditionError(f"{s0} is not an element of {current}")
    safe, _, _ = _check_removal(current, s0, partner, _horizon_for(s0, w, extra), span)
    return safe


def refine_greedy(base: FamilySpec, partner: FamilySpec, budget: int, w: IntegerWindow,
                  extra: int = DEFAULT_EXTRA, span: int = DEFAULT_TAIL_SPAN) -> RefinementResult:
    """Walk the first `budget` elements of base by increasing |x| and drop each safe one.

    Args:
        base: S or U
        partner: T for S, V for U
        budget: how many elements of base to process
        w: window the processed elements must lie in; coverage is re-verified on it
        extra: exponents scanned past bit-length(|x|) per removal
        span: tail span for every stabilization check

    Returns:
        a RefinementResult; elements with inconclusive checks are retained and flagged
    """
    if root_kind(base) not in ("S", "U") or base.kind not in ("S", "U"):
        raise PreconditionError(f"refinement base must be S or U, got {base}")
    if not is_power_family(partner):
        raise PreconditionError(f"refinement partner must be T or V, got {partner}")
    if budget < 0:
        raise PreconditionError(f"budget must be >= 0, got {budget}")

    elements = list(itertools.islice(iter_by_magnitude(base), budget))
    outside = [x for x in elements if not w.contains(x)]
    if outside:
        raise PreconditionError(f"budget {budget} reaches {outside[0]}, outside {w}")

    current = base
    retained, removed, flagged, records = [], [], [], []
    for s0 in elements:
        horizon = _horizon_for(s0, w, extra)
        safe, inconclusive, checked = _check_removal(current, s0, partner, horizon, span)
        if safe:
            current = without(current, {s0})
            removed.append(s0)
            records.append(RemovalRecord(s0, checked, horizon, span))
            logger.debug(f"Removed {s0}")
        else:
            retained.append(s0)
            if inconclusive:
                flagged.append(s0)

    coverage = verify_complement_window(current, partner, w)
    logger.info(f"Refined {base} against {partner}: kept {len(retained)}, removed {len(removed)}, "
                f"coverage on {w} {'holds' if coverage.holds else 'fails'}")
    return RefinementResult(
        base=base,
        partner=partner,
        retained=tuple(sorted(retained)),
        removed=tuple(sorted(removed)),
        budget=budget,
        certification=CERT_TAIL,
        flagged=tuple(sorted(flagged)),
        coverage_holds=coverage.holds,
        covered_window=w,
        removals=tuple(sorted(records, key=lambda r: r.element)),
    )
