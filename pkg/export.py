"""Shape sets, families and verification results into versioned JSON and JSON-lines reports."""

import json
import logging
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

import pandas as pd

from config import Settings
from constructions import FamilySpec
from errors import PreconditionError
from lattice_lift import LatticePairReport
from refinement import RefinementResult
from sumset_engine import RepresentationReport
from verifiers import ClaimResult, WitnessReport
from window_core import IntegerWindow, LatticeSet, LatticeWindow, WindowedSet

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


# ---------------------------------------------------------------------------
# Sets and families
# ---------------------------------------------------------------------------

def _window(w: IntegerWindow | None) -> list[int] | None:
    return None if w is None else [w.lo, w.hi]


def windowed_set_to_dict(s: WindowedSet, form: str = "elements") -> dict:
    """Either the explicit elements or the maximal runs (start, length) of the set."""
    if form == "elements":
        return {"window": _window(s.window), "elements": s.elements()}
    if form == "runs":
        return {"window": _window(s.window), "runs": [list(r) for r in s.to_runs()]}
    raise PreconditionError(f"unknown set format {form!r}, expected 'elements' or 'runs'")


def windowed_set_from_dict(data: dict) -> WindowedSet:
    try:
        window = IntegerWindow(*data["window"])
        if "runs" in data:
            return WindowedSet.from_runs(data["runs"], window)
        return WindowedSet.from_elements(data["elements"], window)
    except (KeyError, TypeError) as e:
        raise PreconditionError(f"malformed set {data!r}: {e}") from e


def family_to_dict(f: FamilySpec) -> dict:
    return f.to_dict()


def family_from_dict(data: dict) -> FamilySpec:
    return FamilySpec.from_dict(data)


def lattice_set_to_dict(X: LatticeSet) -> dict:
    return {
        "dims": [_window(w) for w in X.window.dims],
        "points": [list(p) for p in X],
    }


def lattice_set_from_dict(data: dict) -> LatticeSet:
    try:
        box = LatticeWindow(tuple(IntegerWindow(*w) for w in data["dims"]))
        return LatticeSet(box, data["points"])
    except (KeyError, TypeError) as e:
        raise PreconditionError(f"malformed lattice set {data!r}: {e}") from e


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def report_to_dict(rep: RepresentationReport) -> dict:
    return {
        "y": rep.y,
        "pairs": [list(p) for p in rep.pairs],
        "tail": asdict(rep.tail),
        "horizon": rep.horizon,
        "complete": rep.complete,
    }


def claim_to_dict(result: ClaimResult) -> dict:
    return asdict(result)


def claim_from_dict(data: dict) -> ClaimResult:
    try:
        return ClaimResult(
            claim_id=data["claim_id"],
            n=data.get("n"),
            holds=bool(data["holds"]),
            counterexample=data.get("counterexample"),
            detail=data.get("detail", ""),
        )
    except KeyError as e:
        raise PreconditionError(f"claim row is missing {e}") from e


def witness_report_to_dict(report: WitnessReport) -> dict:
    return {
        "direction": report.direction,
        "certification": report.certification,
        "window": _window(report.window),
        "horizon": report.horizon,
        "witnesses": [[x, y] for x, y in sorted(report.entries.items(), key=lambda kv: (abs(kv[0]), kv[0]))],
        "unverified": report.unverified,
    }


def refinement_to_dict(result: RefinementResult) -> dict:
    return {
        "base": family_to_dict(result.base),
        "partner": family_to_dict(result.partner),
        "budget": result.budget,
        "retained": list(result.retained),
        "removed": list(result.removed),
        "flagged": list(result.flagged),
        "certification": result.certification,
        "coverage_holds": result.coverage_holds,
        "covered_window": _window(result.covered_window),
        "removals": [
            {"element": r.element, "targets_checked": r.targets_checked, "horizon": r.horizon,
             "tail_span": r.tail_span, "certification": r.certification}
            for r in result.removals
        ],
    }


def _point_map(witnesses: dict) -> list:
    return [[list(p), None if y is None else list(y)] for p, y in sorted(witnesses.items())]


def lattice_report_to_dict(report: LatticePairReport, include_points: bool = True) -> dict:
    out = {
        "matrix": None if report.matrix is None else [list(r) for r in report.matrix.entries],
        "dims": [_window(w) for w in report.box.dims],
        "coverage_ok": report.coverage_ok,
        "first_uncovered": None if report.first_uncovered is None else list(report.first_uncovered),
        "certification": report.certification,
        "passed": report.passed,
        "sizes": {"A": len(report.A), "B": len(report.B)},
        "witnesses": _point_map(report.witnesses),
        "partner_witnesses": _point_map(report.partner_witnesses),
        "unverified": [list(p) for p in report.unverified],
    }
    if include_points:
        out["A"] = lattice_set_to_dict(report.A)
        out["B"] = lattice_set_to_dict(report.B)
    return out


# ---------------------------------------------------------------------------
# Payloads and files
# ---------------------------------------------------------------------------

def _metadata(settings: Settings) -> dict:
    return {
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "threads": settings.threads,
        "horizon": settings.horizon,
    }


def build_payload(kind: str, body: dict, settings: Settings) -> dict:
    """Wrap a report body with the schema version and run metadata.

    Args:
        kind: report kind, e.g. "generate", "refine", "lift"
        body: serializable dict from one of the *_to_dict helpers
        settings: settings in force for the run

    Returns:
        dict ready for JSON serialization
    """
    payload = {"schema": SCHEMA_VERSION, "kind": kind, "metadata": _metadata(settings)}
    payload.update(body)
    return payload


def save(payload: dict, output_path: str) -> None:
    """Write payload dict to a JSON file."""
    out = Path(output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload, indent=2, default=str), encoding="utf-8")


def run(kind: str, body: dict, settings: Settings, output_path: str) -> dict:
    """Build payload and save to file. Returns the payload."""
    payload = build_payload(kind, body, settings)
    save(payload, output_path)
    return payload


def write_jsonl(rows: Iterable[ClaimResult], path: str, settings: Settings, suite: str = "") -> int:
    """Header line with schema and metadata, then one ClaimResult per line. Returns the row count."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    header = build_payload("header", {"suite": suite}, settings)
    count = 0
    with out.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, default=str) + "\n")
        for row in rows:
            fh.write(json.dumps(claim_to_dict(row), default=str) + "\n")
            count += 1
    logger.debug(f"Wrote {count} claim rows to {out}")
    return count


def read_jsonl(path: str) -> tuple[dict, list[ClaimResult]]:
    """Inverse of write_jsonl: (header, claim results)."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise PreconditionError(f"{path} is empty")
    try:
        header = json.loads(lines[0])
        rows = [claim_from_dict(json.loads(ln)) for ln in lines[1:]]
    except json.JSONDecodeError as e:
        raise PreconditionError(f"{path} is not valid JSON lines: {e}") from e
    if header.get("schema") != SCHEMA_VERSION:
        raise PreconditionError(f"{path} has schema {header.get('schema')!r}, expected {SCHEMA_VERSION!r}")
    return header, rows


# ---------------------------------------------------------------------------
# Claim summary
# ---------------------------------------------------------------------------

def claim_summary(results: Iterable[ClaimResult]) -> list[dict]:
    """Per claim id: evaluated, held and failed counts and the first failing n."""
    df = pd.DataFrame([claim_to_dict(r) for r in results])
    if df.empty:
        return []

    summary = []
    for claim_id, grp in df.groupby("claim_id", sort=True):
        failed = grp[~grp["holds"]]
        failing_n = failed["n"].dropna()
        summary.append({
            "claim_id": claim_id,
            "evaluated": int(len(grp)),
            "held": int(grp["holds"].sum()),
            "failed": int(len(failed)),
            "first_failing_n": int(failing_n.min()) if not failing_n.empty else None,
        })
    return summary


def summary_path(report_path: str) -> Path:
    return Path(f"{report_path}.summary.json")


def write_summary(results: Iterable[ClaimResult], report_path: str, settings: Settings) -> Path:
    out = summary_path(report_path)
    save(build_payload("summary", {"claims": claim_summary(results)}, settings), str(out))
    return out
