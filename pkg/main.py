"""main.py: command-line entry point for generate, verify, refine, lift and selftest."""
import argparse
import itertools
import json
import logging
import re
import sys
from pathlib import Path

import numpy as np

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
logger = logging.getLogger(__name__)

import export
import oracle
from config import Settings, load_settings
from constructions import (
    S_FAMILY,
    T_FAMILY,
    U_FAMILY,
    V_FAMILY,
    iter_by_magnitude,
    materialize,
    materialize_lattice,
    parse_family,
)
from errors import CominimalError, PreconditionError
from lattice_lift import IntMatrix, automorphism_report, build_quadrant_pair
from refinement import refine_greedy
from sumset_engine import representations, sumset
from verifiers import (
    ClaimResult,
    WitnessReport,
    check_claims_ST,
    check_claims_UV,
    check_self_cominimal_cyclic,
    check_uv_finiteness,
    is_3ap_free,
    suite_passed,
    verify_complement_window,
    verify_minimality,
    verify_removable_family,
)
from window_core import IntegerWindow, LatticeWindow, WindowedSet

EXIT_OK, EXIT_CLAIM, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUITES = ("st-claims", "uv-claims", "uv-finiteness", "complement", "minimality", "removable")
DEFAULT_N = {"st-claims": "3..10", "uv-claims": "3..10", "uv-finiteness": "4..10", "removable": "3..4"}
DEFAULT_WINDOW = {"complement": "-4096..4096", "minimality": "-1024..1024", "removable": "-4096..4096"}
MINIMALITY_MAX_EXPONENT = 8
ORACLE_CASES = 1000
CYCLIC_MAX_ORDER = 12
RANGE_OPTIONS = ("--window", "--box", "--n")
RANGE_VALUE = re.compile(r"^-?\d+\.\.")


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _join_range_values(argv: list[str]) -> list[str]:
    """Glue `--window -20..-1` into `--window=-20..-1` so argparse does not read the value as a flag."""
    out = []
    args = iter(argv)
    for arg in args:
        out.append(arg)
        if arg not in RANGE_OPTIONS:
            continue
        value = next(args, None)
        if value is None:
            break
        if RANGE_VALUE.match(value):
            out[-1] = f"{arg}={value}"
        else:
            out.append(value)
    return out


def _report_path(settings: Settings, given: str | None, default_name: str) -> str:
    return given or str(Path(settings.report_dir) / default_name)


def _witness_claims(report: WitnessReport, claim_id: str) -> list[ClaimResult]:
    """One row per removed element; the witness (or its absence) goes in the detail."""
    rows = []
    for b, y in report.entries.items():
        k = abs(b).bit_length() - 1
        detail = f"{b}: witness {y} ({report.certification})" if y is not None else f"{b}: no witness on {report.window}"
        rows.append(ClaimResult(claim_id, k, y is not None, None, detail))
    return rows


def _lattice_box(text: str, d: int) -> LatticeWindow:
    box = LatticeWindow.parse(text)
    if box.d == 1 and d > 1:
        return LatticeWindow.cube(box.dims[0].lo, box.dims[0].hi, d)
    return box


def _default_refine_window(base, budget: int) -> IntegerWindow:
    reach = max((abs(x) for x in itertools.islice(iter_by_magnitude(base), budget)), default=1)
    return IntegerWindow(-reach, reach)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_generate(args, settings: Settings) -> int:
    f = parse_family(args.family)

    logger.info("=== Step 1/2: Materialize ===")
    if f.dimension > 1:
        X = materialize_lattice(f, LatticeWindow.parse(args.window))
        body = {"family": export.family_to_dict(f), "set": export.lattice_set_to_dict(X)}
        logger.info(f"{f} has {len(X)} points in {X.window}")
    else:
        X = materialize(f, IntegerWindow.parse(args.window))
        form = "runs" if args.format == "runs" else "elements"
        body = {"family": export.family_to_dict(f), "set": export.windowed_set_to_dict(X, form)}
        logger.info(f"{f} has {len(X)} elements in {X.window}")

    logger.info("=== Step 2/2: Write ===")
    if args.out:
        export.run("generate", body, settings, args.out)
        logger.info(f"Output written to {args.out}")
    else:
        print(json.dumps(body["set"]))
    return EXIT_OK


def _run_suite(args, settings: Settings) -> list[ClaimResult]:
    suite = args.suite
    if suite in ("st-claims", "uv-claims", "uv-finiteness", "removable"):
        n = IntegerWindow.parse(args.n or DEFAULT_N[suite])
    if suite in DEFAULT_WINDOW:
        w = IntegerWindow.parse(args.window or DEFAULT_WINDOW[suite])

    if suite == "st-claims":
        return check_claims_ST(n.lo, n.hi, workers=settings.threads)
    if suite == "uv-claims":
        return check_claims_UV(n.lo, n.hi, workers=settings.threads)
    if suite == "uv-finiteness":
        return check_uv_finiteness(n.lo, n.hi, workers=settings.threads)
    if suite == "complement":
        A = parse_family(args.family) if args.family else S_FAMILY
        B = parse_family(args.partner) if args.partner else T_FAMILY
        return [verify_complement_window(A, B, w)]
    if suite == "minimality":
        removable = [1 << k for k in range(MINIMALITY_MAX_EXPONENT + 1)]
        report = verify_minimality(S_FAMILY, T_FAMILY, removable, w, settings.horizon)
        return _witness_claims(report, "st.minimality")
    return verify_removable_family(range(n.lo, n.hi + 1), w)


def cmd_verify(args, settings: Settings) -> int:
    logger.info(f"=== Step 1/2: Verify {args.suite} ===")
    results = _run_suite(args, settings)
    failed = [r for r in results if not r.holds]
    for r in failed:
        logger.warning(f"{r.claim_id} n={r.n} fails: {r.detail}")
    logger.info(f"{len(results)} claims evaluated, {len(failed)} failed")

    logger.info("=== Step 2/2: Report ===")
    path = _report_path(settings, args.report, f"{args.suite}.jsonl")
    export.write_jsonl(results, path, settings, suite=args.suite)
    summary = export.write_summary(results, path, settings)
    logger.info(f"Report written to {path} (summary {summary})")
    return EXIT_OK if suite_passed(results) else EXIT_CLAIM


def cmd_refine(args, settings: Settings) -> int:
    base, partner = (S_FAMILY, T_FAMILY) if args.base == "S" else (U_FAMILY, V_FAMILY)
    budget = settings.refine_budget if args.budget is None else args.budget
    w = IntegerWindow.parse(args.window) if args.window else _default_refine_window(base, budget)

    logger.info(f"=== Step 1/2: Refine {base} over {budget} elements ===")
    result = refine_greedy(base, partner, budget, w, extra=settings.refine_extra, span=settings.tail_span)
    if result.flagged:
        logger.warning(f"Retained after inconclusive checks: {list(result.flagged)}")

    logger.info("=== Step 2/2: Report ===")
    path = _report_path(settings, args.report, f"refine-{args.base}.json")
    export.run("refine", export.refinement_to_dict(result), settings, path)
    logger.info(f"Report written to {path}")
    return EXIT_OK if result.coverage_holds else EXIT_CLAIM


def cmd_lift(args, settings: Settings) -> int:
    if (args.matrix is None) == (args.quadrant is None):
        raise PreconditionError("give exactly one of --matrix and --quadrant")

    logger.info("=== Step 1/2: Build and verify ===")
    if args.matrix is not None:
        M = IntMatrix.parse(args.matrix)
        report = automorphism_report(M, _lattice_box(args.box, M.n), settings.threads)
        name = "lift-matrix.json"
    else:
        report = build_quadrant_pair(args.quadrant, _lattice_box(args.box, 2 * args.quadrant), settings.threads)
        name = f"lift-quadrant-{args.quadrant}.json"
    logger.info(f"|A| = {len(report.A)}, |B| = {len(report.B)}, coverage "
                f"{'ok' if report.coverage_ok else f'fails at {report.first_uncovered}'}, "
                f"{len(report.unverified)} elements without witness")

    logger.info("=== Step 2/2: Report ===")
    path = _report_path(settings, args.report, name)
    export.run("lift", export.lattice_report_to_dict(report), settings, path)
    logger.info(f"Report written to {path}")
    return EXIT_OK if report.passed else EXIT_CLAIM


# ---------------------------------------------------------------------------
# Selftest
# ---------------------------------------------------------------------------

def _oracle_checks(seed: int = 0) -> list[ClaimResult]:
    rng = np.random.default_rng(seed)
    rows = []

    mismatch = None
    for _ in range(ORACLE_CASES):
        a = rng.choice(np.arange(-40, 41), size=int(rng.integers(1, 20)), replace=False).tolist()
        b = rng.choice(np.arange(-40, 41), size=int(rng.integers(1, 20)), replace=False).tolist()
        target = IntegerWindow(-60, 60)
        fast = sumset(WindowedSet.from_elements(a), WindowedSet.from_elements(b), target)
        if fast != oracle.naive_sumset(a, b, target):
            mismatch = f"sumset differs for {sorted(a)} + {sorted(b)}"
            break
        if is_3ap_free(a) != oracle.brute_is_3ap_free(a):
            mismatch = f"3AP verdict differs for {sorted(a)}"
            break
    rows.append(ClaimResult("oracle.sumset", None, mismatch is None, None,
                            mismatch or f"{ORACLE_CASES} random pairs agree"))

    S = materialize(S_FAMILY, IntegerWindow(-600, -1)).elements()
    T = materialize(T_FAMILY, IntegerWindow(1, 1024)).elements()
    bad = next((y for y in range(-64, 65)
                if [p for p in representations(y, S_FAMILY, T_FAMILY, 13).pairs if abs(p[1]) <= 512]
                != [p for p in oracle.brute_reps(y, S, T) if abs(p[1]) <= 512]), None)
    rows.append(ClaimResult("oracle.representations", None, bad is None, bad,
                            "S + T representations agree on [-64, 64]" if bad is None
                            else f"representations of {bad} differ"))

    for m in range(1, CYCLIC_MAX_ORDER + 1):
        bad = None
        for mask in range(1, 1 << m):
            A = [k for k in range(m) if mask >> k & 1]
            if check_self_cominimal_cyclic(A, m) != oracle.brute_cominimal_cyclic(A, A, m):
                bad = mask
                break
        rows.append(ClaimResult("oracle.cyclic", m, bad is None, bad,
                                f"all subsets of Z_{m} agree" if bad is None else f"subset mask {bad} differs"))
    return rows


def cmd_selftest(args, settings: Settings) -> int:
    workers = settings.threads
    results: list[ClaimResult] = []

    logger.info("=== Step 1/4: Oracle equivalence ===")
    results += _oracle_checks()

    logger.info("=== Step 2/4: Claim suites ===")
    results += check_claims_ST(3, 10, workers=workers)
    results += check_claims_UV(3, 10, workers=workers)
    results += check_uv_finiteness(4, 10, workers=workers)

    logger.info("=== Step 3/4: Complement and minimality ===")
    results.append(verify_complement_window(S_FAMILY, T_FAMILY, IntegerWindow(-4096, 4096)))
    results.append(verify_complement_window(U_FAMILY, V_FAMILY, IntegerWindow(-4096, 4096)))
    minimality = verify_minimality(S_FAMILY, T_FAMILY, [1 << k for k in range(MINIMALITY_MAX_EXPONENT + 1)],
                                   IntegerWindow(-1024, 1024), settings.horizon)
    results += _witness_claims(minimality, "st.minimality")
    results += verify_removable_family([3, 4], IntegerWindow(-4096, 4096))

    logger.info("=== Step 4/4: Report ===")
    path = _report_path(settings, args.report, "selftest.jsonl")
    export.write_jsonl(results, path, settings, suite="selftest")
    export.write_summary(results, path, settings)
    failed = [r for r in results if not r.holds]
    for r in failed:
        logger.info(f"{r.claim_id} n={r.n}: {r.detail}")
    passed = suite_passed(results)
    logger.info(f"Selftest {'passed' if passed else 'FAILED'}: {len(results)} checks, {len(failed)} not holding")
    return EXIT_OK if passed else EXIT_CLAIM


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cominimal", description="Co-minimal pairs in Z and Z^d")
    parser.add_argument("--config", help="JSON file with Settings overrides")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG")
    parser.add_argument("--threads", type=int, help="worker threads (overrides COMINIMAL_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="materialize a family on a window")
    p.add_argument("--family", required=True, help="JSON FamilySpec or shorthand: S, T, U, V, I:3, J:5, W:-64..64")
    p.add_argument("--window", required=True,
                   help="LO..HI, or LO..HI,LO..HI for product families")
    p.add_argument("--out", help="write a JSON payload here instead of printing the set")
    p.add_argument("--format", choices=("json", "runs"), default="json",
                   help="json lists the elements, runs gives (start, length) pairs")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--n", help="index range LO..HI")
    p.add_argument("--window", help="target window LO..HI")
    p.add_argument("--family", help="first family for the complement suite (default S)")
    p.add_argument("--partner", help="second family for the complement suite (default T)")
    p.add_argument("--report", help="JSON-lines report path")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("refine", help="greedy minimalization of S or U")
    p.add_argument("--base", choices=("S", "U"), default="S")
    p.add_argument("--budget", type=int)
    p.add_argument("--window", help="window holding the processed elements")
    p.add_argument("--report")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("lift", help="build and verify a pair in Z^d")
    p.add_argument("--matrix", help="JSON integer matrix with determinant +-1")
    p.add_argument("--quadrant", type=int, help="rank d of a quadrant pair in Z^(2d)")
    p.add_argument("--box", default="-64..64", help="LO..HI per axis, or one LO..HI for every axis")
    p.add_argument("--report")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("selftest", help="oracle equivalence and every claim suite")
    p.add_argument("--report")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_join_range_values(argv))
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        settings = load_settings(args.config, threads=args.threads)
        return args.func(args, settings)
    except PreconditionError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"{args.command} failed on I/O: {e}")
        return EXIT_IO
    except CominimalError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_CLAIM


if __name__ == "__main__":
    sys.exit(main())
