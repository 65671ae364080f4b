"""Command line front end: ``verify``, ``table`` and ``classify``.

Exit codes: 0 when everything passes, 1 on a verification failure or a
boundary invariant, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from kappamu import triple as tr
from kappamu.exceptions import BoundaryInvariantError
from kappamu.models import (
    Family,
    ModelSpec,
    Tolerances,
    alpha_for_invariant,
    family_for_invariant,
    verify_model,
)

logger = logging.getLogger("kappamu")

TOL_ENV = "KAPPAMU_TOL"
DEFAULT_N = (1, 2, 3, 5)
DEFAULT_ALPHA = (0.3, 0.5, 0.8)
DEFAULT_INVARIANTS = (-5.0, -1.5, -0.5, 0.0, 0.5, 1.5, 5.0)
ROW_ORDER = ("sphere", "para", "hyperbolic")
ROW_RANGES = {"sphere": "I > 1", "para": "-1 < I < 1", "hyperbolic": "I < -1"}


class UsageError(Exception):
    pass


def _round(obj):
    """Floats to 15 significant digits, non-finite values to null."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}") if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round(obj.item())
    return obj


def dumps(obj) -> str:
    return json.dumps(_round(obj), ensure_ascii=False, allow_nan=False)


def _float_list(text: str, name: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{name}: expected comma separated numbers, got {text!r}") from None
    if not all(math.isfinite(v) for v in values):
        raise UsageError(f"{name}: values must be finite")
    return values


def _int_list(text: str, name: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{name}: expected comma separated integers, got {text!r}") from None
    if any(v < 1 for v in values):
        raise UsageError(f"{name}: n must be >= 1")
    return values


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` with ``stop`` included when it lies on the grid."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--alpha-grid expects start:stop:step, got {text!r}")
    start, stop, step = _float_list(",".join(parts), "--alpha-grid")
    if start <= 0 or stop <= 0 or step <= 0:
        raise UsageError("--alpha-grid bounds and step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(max(count, 0))]


def _tolerances(args) -> Tolerances:
    if args.tol is not None:
        tol = args.tol
    elif os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise UsageError(f"{TOL_ENV} must be a number, got {os.environ[TOL_ENV]!r}") from None
    else:
        return Tolerances()
    if not (math.isfinite(tol) and tol > 0):
        raise UsageError(f"tolerance must be positive, got {tol}")
    return Tolerances.with_default(tol)


def _run_one(job):
    spec, tol, samples, seed = job
    return verify_model(spec, tol, samples=samples, seed=seed).as_dict()


def _run_all(specs, tol, samples, seed, jobs) -> list[dict]:
    work = [(s, tol, samples, seed) for s in specs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, work))  # map keeps grid order
    return [_run_one(w) for w in work]


def _text_line(rep: dict) -> str:
    spec = rep["spec"]
    head = f"{spec['family']:<14} n={spec['n']:<2} alpha={spec['alpha']:<8g}"
    status = "PASS" if rep["pass"] else "FAIL"
    if rep["sasakian"]:
        body = "sasakian"
    elif rep["boeckx"] is None:
        body = "no invariant"
    else:
        body = f"kappa={rep['kappa']:.6e} mu={rep['mu']:.6e} I={rep['boeckx']:.6e}"
    worst = max(rep["residuals"].items(), key=lambda kv: kv[1] if math.isfinite(kv[1]) else math.inf, default=None)
    extra = ""
    if worst is not None:
        extra = f" worst={worst[0]}:{worst[1]:.6e}"
    if rep["failed"]:
        extra += " failed=" + ",".join(rep["failed"])
    if rep["errors"]:
        extra += " errors=" + "; ".join(rep["errors"])
    return f"{status} {head} {body}{extra}"


def run_verify(args) -> int:
    families = list(Family) if args.family == "all" else [Family.parse(args.family)]
    ns = _int_list(args.n, "--n")
    if args.alpha_grid is not None:
        alphas = parse_grid(args.alpha_grid)
    else:
        alphas = _float_list(args.alpha, "--alpha")
    if any(a <= 0 for a in alphas):
        raise UsageError("alpha must be positive")
    if not ns or not alphas:
        raise UsageError("empty grid")
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    tol = _tolerances(args)
    specs = [ModelSpec(f, n, a) for f in families for n in ns for a in alphas]
    reports = _run_all(specs, tol, args.samples, args.seed, args.jobs)
    for rep in reports:
        print(dumps(rep) if args.out == "json" else _text_line(rep))
    n_fail = sum(not r["pass"] for r in reports)
    if n_fail:
        logger.error("%d of %d models failed verification", n_fail, len(reports))
    return 1 if n_fail else 0


def build_table(invariants, n: int, tol: Tolerances, samples: int, seed: int) -> dict:
    """Classification rows for a grid of invariants, each backed by a verified model."""
    entries, rows = [], {}
    for I in invariants:
        try:
            family = family_for_invariant(I)
        except BoundaryInvariantError:
            entries.append({"invariant": I, "status": "excluded (|I| = 1)"})
            continue
        alpha = alpha_for_invariant(family, I)
        rep = verify_model(ModelSpec(family, n, alpha), tol, samples=samples, seed=seed)
        ok = rep.passed and rep.boeckx is not None and abs(rep.boeckx - I) <= 1e-8 * max(1.0, abs(I))
        label = tr.classify_base(I, n)
        entries.append(
            {"invariant": I, "status": "verified" if ok else "failed", "family": family.value, "alpha": alpha, "boeckx": rep.boeckx}
        )
        row = rows.setdefault(
            label.key,
            {"range": ROW_RANGES[label.key], **label.as_dict(), "invariants": [], "verified": True},
        )
        row["invariants"].append(I)
        row["verified"] = row["verified"] and ok
    ordered = [rows[k] for k in ROW_ORDER if k in rows]
    return {"n": n, "rows": ordered, "entries": entries}


def run_table(args) -> int:
    invariants = _float_list(args.invariants, "--invariants")
    if not invariants:
        raise UsageError("empty invariant grid")
    n = _int_list(str(args.n), "--n")[0]
    table = build_table(invariants, n, _tolerances(args), args.samples, args.seed)
    if args.out == "json":
        print(dumps(table))
    else:
        print(f"{'range':<12} {'model space':<20} {'base space':<28} {'type':<34} invariants")
        for row in table["rows"]:
            flag = "" if row["verified"] else "  [unverified]"
            inv = ", ".join(f"{v:g}" for v in row["invariants"])
            print(f"{row['range']:<12} {row['model_space']:<20} {row['base_space']:<28} {row['type']:<34} {inv}{flag}")
        for e in table["entries"]:
            if e["status"] != "verified":
                print(f"I = {e['invariant']:g}: {e['status']}")
    ok = all(r["verified"] for r in table["rows"]) and table["rows"]
    return 0 if ok else 1


def classify(I: float, n: int | None = None) -> dict:
    """Labels, realizing alpha and standard-structure constant for invariant ``I``."""
    label = tr.classify_base(I, n)
    family = family_for_invariant(I)
    kind, a = tr.standard_constant(I)
    return {
        "invariant": I,
        "family": family.value,
        **label.as_dict(),
        "alpha": alpha_for_invariant(family, I),
        "structure": kind,
        "a": a,
    }


def run_classify(args) -> int:
    n = None if args.n is None else _int_list(str(args.n), "--n")[0]
    if not math.isfinite(args.invariant):
        raise UsageError("--invariant must be finite")
    try:
        rec = classify(args.invariant, n)
    except BoundaryInvariantError as exc:
        logger.error("%s", exc)
        return 1
    if args.out == "json":
        print(dumps(rec))
    else:
        for key in ("model_space", "base_space", "type", "structure"):
            print(f"{key}: {rec[key]}")
        print(f"alpha: {rec['alpha']:.15g}")
        print(f"a: {rec['a']:.15g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kappamu", description="Verify homogeneous (kappa, mu)-space models.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None, help=f"default residual tolerance (env {TOL_ENV})")
        p.add_argument("--out", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=10, help="random isotropy elements per model")

    v = sub.add_parser("verify", help="build and verify models over a grid")
    v.add_argument("--family", default="all", help="so_n_plus_2, so_n_2, so_n_plus_1_1 or all")
    v.add_argument("--n", default=",".join(map(str, DEFAULT_N)), help="comma separated n values")
    group = v.add_mutually_exclusive_group()
    group.add_argument("--alpha", default=",".join(map(str, DEFAULT_ALPHA)), help="comma separated alpha values")
    group.add_argument("--alpha-grid", default=None, help="start:stop:step")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    common(v)

    t = sub.add_parser("table", help="classification table backed by verified models")
    t.add_argument("--invariants", default=",".join(f"{x:g}" for x in DEFAULT_INVARIANTS))
    t.add_argument("--n", type=int, default=2)
    common(t)

    c = sub.add_parser("classify", help="labels for a given Boeckx invariant")
    c.add_argument("--invariant", type=float, required=True)
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--out", choices=("text", "json"), default="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    handler = {"verify": run_verify, "table": run_table, "classify": run_classify}[args.command]
    try:
        if args.command == "verify" and args.family != "all":
            Family.parse(args.family)
        return handler(args)
    except (UsageError, ValueError, TypeError) as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
