"""Acceptance criteria, each checked at its stated tolerance.

Every test records one ``PASS``/``FAIL`` line; ``conftest.py`` prints them in
the terminal summary so they show up even when pytest captures output.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from kappamu import contact as ct
from kappamu import triple as tr
from kappamu.models import Family, ModelSpec, closed_form_invariant, verify_model

FAMILIES = list(Family)
NS = (1, 2, 3, 5)
ALPHAS = (0.3, 0.5, 0.8)
GRID = [ModelSpec(f, n, a) for f in FAMILIES for n in NS for a in ALPHAS]

_CACHE = {}
VERDICTS: list[str] = []


def emit(number, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    VERDICTS.append(line)
    print(line)
    return ok


def grid_reports():
    if "reports" not in _CACHE:
        start = time.perf_counter()
        reports = [verify_model(spec) for spec in GRID]
        _CACHE["elapsed"] = time.perf_counter() - start
        _CACHE["reports"] = reports
    return _CACHE["reports"], _CACHE["elapsed"]


def worst(key):
    reports, _ = grid_reports()
    return max(r.residuals.get(key, math.inf) for r in reports)


def family_formula(spec):
    a2 = spec.alpha**2
    return {
        Family.SPHERE_TYPE: (1 + a2) / (1 - a2),
        Family.HYPERBOLIC_TYPE: -(1 + a2) / (1 - a2),
        Family.PARA_TYPE: (a2 - 1) / (a2 + 1),
    }[spec.family]


def test_criterion_1_kappa_mu_condition():
    reports, elapsed = grid_reports()
    res = worst("kappa_mu.fit_residual")
    ok = res <= 1e-8 and elapsed < 30 and not any(r.errors for r in reports)
    assert emit(1, ok, f"max fit residual {res:.3e} over {len(reports)} models in {elapsed:.2f} s")


def test_criterion_2_closed_form_curvature():
    res = worst("kmu_curvature.cross_check")
    assert emit(2, res <= 1e-8, f"max closed-form vs Levi-Civita curvature {res:.3e}")


def test_criterion_3_invariants():
    reports, _ = grid_reports()
    err = max(abs(r.boeckx - family_formula(r.spec)) for r in reports)
    spots = {
        "sphere a=0.5": (verify_model(ModelSpec(Family.SPHERE_TYPE, 2, 0.5)).boeckx, 5 / 3),
        "hyperbolic a=0.5": (verify_model(ModelSpec(Family.HYPERBOLIC_TYPE, 2, 0.5)).boeckx, -5 / 3),
        "para a=2": (verify_model(ModelSpec(Family.PARA_TYPE, 2, 2.0)).boeckx, 0.6),
    }
    spot_err = max(abs(got - want) for got, want in spots.values())
    ok = err <= 1e-8 and spot_err <= 1e-8
    assert emit(3, ok, f"max |I_fit - I_formula| {err:.3e}; spot values error {spot_err:.3e}")


def test_criterion_4_d_homothetic_invariance():
    res = worst("d_homothetic.invariance")
    km = ct.KappaMu.from_parameters(0.4375, -0.5)
    out = ct.d_homothetic(km, 2.0)
    spot = max(abs(out.kappa - 0.859375), abs(out.mu - 0.75), abs(out.boeckx - 5 / 3), abs(km.boeckx - 5 / 3))
    ok = res <= 1e-10 and spot <= 1e-12
    assert emit(4, ok, f"max |I(a) - I| over a in (0.5, 2, 7) {res:.3e}; spot (0.859375, 0.75) error {spot:.3e}")


def test_criterion_5_base_curvature_formula():
    res = worst("base_curvature.cross_check")
    assert emit(5, res <= 1e-9, f"max nine-term formula vs -[[X,Y]_hbar,Z] {res:.3e}")


def test_criterion_6_standard_structure():
    reports, _ = grid_reports()
    inv = worst("standard.invariant")
    uniq = min(min(r.residuals["standard.uniqueness_low"], r.residuals["standard.uniqueness_high"]) for r in reports)
    kinds_ok = all(
        r.standard_structure["kind"] == ("complex" if abs(r.boeckx) > 1 else "para-complex")
        and abs(r.standard_structure["a"] - math.sqrt(abs(r.boeckx + 1) / abs(r.boeckx - 1))) <= 1e-9
        for r in reports
    )
    spot = verify_model(ModelSpec(Family.SPHERE_TYPE, 2, 0.5)).standard_structure["a"]
    ok = inv <= 1e-9 and uniq > 1e-3 and kinds_ok and abs(spot - 2.0) <= 1e-9
    assert emit(6, ok, f"max invariance residual {inv:.3e}; min residual at 0.9a/1.1a {uniq:.3e}; I=5/3 gives a={spot:.12g}")


def test_criterion_7_tau_and_jordan_extension():
    keys = ("tau.automorphism", "tau.square", "tau.anticommutation", "tau.restricted_bracket", "jordan.closed_form")
    res = {k: worst(k) for k in keys}
    rows = [tr.classify_base(I).base_space for I in (2.0, 0.0, -2.0)]
    rows_ok = rows == ["SO(n+2)/(SO(n)×SO(2))", "SO(n+1,1)/(SO(n)×SO(1,1))", "SO(n,2)/(SO(n)×SO(2))"]
    ok = max(res.values()) <= 1e-9 and rows_ok
    detail = ", ".join(f"{k} {v:.3e}" for k, v in res.items())
    assert emit(7, ok, f"{detail}; classification rows {'match' if rows_ok else 'differ'}")


def _sphere_axioms():
    worst_res = 0.0
    for dim in range(1, 7):
        T = tr.sphere_jts(dim)
        worst_res = max(worst_res, tr.axiom_residual(T), tr.axiom_residual(-T))
    return worst_res


def test_criterion_8a_sphere_jts_axioms():
    res = _sphere_axioms()
    assert emit("8a", res <= 1e-12, f"sphere and hyperbolic JTS axioms, dims 1-6, max residual {res:.3e}")


@pytest.mark.xfail(
    strict=True,
    reason="R_T of the sphere JTS equals 2R, not R; recorded as unattainable in the decision ledger",
)
def test_criterion_8b_jordan_curvature_equals_sphere_curvature():
    res = 0.0
    for dim in range(1, 7):
        R = tr.curvature_of(tr.sphere_lts(dim))
        res = max(res, np.abs(tr.jordan_curvature(tr.sphere_jts(dim)) - R).max())
        res = max(res, np.abs(tr.jordan_curvature(-tr.sphere_jts(dim)) + R).max())
    assert emit("8b", res <= 1e-12, f"max |R_T - R| over dims 1-6 {res:.3e}")


def test_criterion_9_kappa_bound_and_eta_parallel():
    res = {k: worst(k) for k in ("kappa_mu.kappa_le_1", "kappa_mu.lambda_identity", "eta_parallel")}
    ok = res["kappa_mu.kappa_le_1"] <= 1e-10 and res["kappa_mu.lambda_identity"] <= 1e-9 and res["eta_parallel"] <= 1e-9
    assert emit(9, ok, ", ".join(f"{k} {v:.3e}" for k, v in res.items()))


def test_criterion_10_tangent_sphere_bundle():
    exact = [ct.boeckx_t1m(c) for c in (-1.0, 0.0, 3.0)] == [0.0, 1.0, 2.0]
    scan = [c for c in np.linspace(-5, 5, 10001) if abs(c - 1) > 1e-12]
    values = np.array([ct.boeckx_t1m(float(c)) for c in scan])
    ok = exact and bool(np.all(values > -1)) and bool(np.all(np.isfinite(values)))
    assert emit(10, ok, f"exact values {'match' if exact else 'differ'}; scan minimum {values.min():.6g}")


def test_criterion_11_deterministic_cli():
    argv = [sys.executable, "-m", "kappamu", "verify", "--out", "json", "--seed", "0"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    ok = first.returncode == 0 and first.stdout == second.stdout and len(first.stdout.splitlines()) == len(GRID)
    assert emit(11, ok, f"{len(first.stdout)} bytes of JSON, runs identical: {first.stdout == second.stdout}")


def test_sanity_closed_form_matches_formula():
    # the grid uses alpha < 1, where both forms of the invariant coincide
    assert all(abs(closed_form_invariant(s) - family_formula(s)) < 1e-14 for s in GRID)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
