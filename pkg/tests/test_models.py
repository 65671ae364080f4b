import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from kappamu.exceptions import BoundaryInvariantError
from kappamu.models import (
    Family,
    ModelSpec,
    Tolerances,
    ad_invariance_residual,
    ad_invariance_residual_for,
    alpha_for_invariant,
    build_model,
    closed_form_invariant,
    family_for_invariant,
    verify_model,
)


def test_build_model_sphere():
    b = build_model(ModelSpec(Family.SPHERE_TYPE, 2, 0.5))
    assert len(b.decomposition.full) == 6
    assert b.decomposition.dim_m == 5
    np.testing.assert_array_equal(b.decomposition.xi[:2, :2], [[0, -1], [1, 0]])


@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("n", [1, 2, 4])
def test_dim_m(family, n):
    assert build_model(ModelSpec(family, n, 0.7)).decomposition.dim_m == 2 * n + 1


def test_para_n1_alpha1():
    r = verify_model(ModelSpec(Family.PARA_TYPE, 1, 1.0))
    assert r.passed
    assert r.lam == pytest.approx(1.0, abs=1e-12)
    assert r.kappa == pytest.approx(0.0, abs=1e-12)
    assert r.boeckx == pytest.approx(0.0, abs=1e-12)


def test_spec_validation():
    with pytest.raises(ValueError):
        ModelSpec("so_n_plus_2", 0, 0.5)
    with pytest.raises(ValueError):
        ModelSpec("so_n_plus_2", 2, -1.0)
    with pytest.raises(TypeError):
        ModelSpec("so_n_plus_2", 2.5, 0.5)
    with pytest.raises(ValueError):
        ModelSpec("so_7", 2, 0.5)
    assert ModelSpec("hyperbolic", 2, 0.5).family is Family.HYPERBOLIC_TYPE


def test_closed_form_invariant():
    assert closed_form_invariant(ModelSpec(1, 2, 0.5)) == pytest.approx(5 / 3)
    assert closed_form_invariant(ModelSpec(2, 2, 0.5)) == pytest.approx(-5 / 3)
    assert closed_form_invariant(ModelSpec(3, 2, 1.0)) == 0.0
    assert closed_form_invariant(ModelSpec(1, 2, 1.0)) is None
    # alpha and 1/alpha give the same invariant in families 1 and 2
    assert closed_form_invariant(ModelSpec(1, 2, 2.0)) == pytest.approx(5 / 3)


def test_alpha_for_invariant():
    assert alpha_for_invariant(Family.SPHERE_TYPE, 2.0) == pytest.approx(math.sqrt(1 / 3), abs=1e-10)
    assert alpha_for_invariant(Family.HYPERBOLIC_TYPE, -5 / 3) == pytest.approx(0.5, abs=1e-12)
    assert alpha_for_invariant(Family.PARA_TYPE, 0.0) == 1.0
    with pytest.raises(ValueError):
        alpha_for_invariant(Family.SPHERE_TYPE, 0.5)
    with pytest.raises(BoundaryInvariantError):
        family_for_invariant(1.0)


@settings(max_examples=100, deadline=None)
@given(family=st.sampled_from(list(Family)), alpha=st.floats(0.01, 0.99))
def test_alpha_round_trip(family, alpha):
    I = closed_form_invariant(ModelSpec(family, 1, alpha))
    assert alpha_for_invariant(family, I) == pytest.approx(alpha, abs=1e-10)
    assert family_for_invariant(I) is family


def test_ad_invariance():
    b = build_model(ModelSpec(1, 3, 0.5))
    assert ad_invariance_residual(b, samples=10, seed=0) < 1e-9
    assert ad_invariance_residual(build_model(ModelSpec(2, 1, 0.5))) < 1e-14
    # a rotation mixing the xi-block with a v-direction is not in the isotropy group
    W = np.zeros((5, 5))
    W[0, 2], W[2, 0] = 0.3, -0.3
    assert ad_invariance_residual_for(b, scipy.linalg.expm(W)) > 1e-2


def test_verify_sphere():
    r = verify_model(ModelSpec(1, 2, 0.5))
    assert r.passed, r.failed
    assert r.boeckx == pytest.approx(5 / 3, abs=1e-12)
    assert r.base["base_space"] == "SO(4)/(SO(2)×SO(2))"
    assert r.standard_structure["a"] == pytest.approx(2.0, abs=1e-12)


def test_verify_hyperbolic():
    r = verify_model(ModelSpec(2, 3, 0.5))
    assert r.passed, r.failed
    assert r.boeckx == pytest.approx(-5 / 3, abs=1e-12)
    assert r.base["base_space"] == "SO(3,2)/(SO(3)×SO(2))"


def test_verify_sasakian_skips_kappa_mu_stages():
    r = verify_model(ModelSpec(1, 2, 1.0))
    assert r.sasakian and r.passed
    assert r.boeckx is None and r.mu is None
    assert not any(k.startswith(("d_homothetic", "base", "tau", "jordan")) for k in r.residuals)


def test_report_failure_on_tight_tolerance():
    r = verify_model(ModelSpec(1, 2, 0.5), Tolerances.with_default(1e-30))
    assert not r.passed and r.failed
    assert set(r.as_dict()) >= {"spec", "residuals", "kappa", "mu", "lambda", "boeckx", "base", "standard_structure", "pass"}


@pytest.mark.parametrize("family", list(Family))
def test_invariant_ranges(family):
    I = verify_model(ModelSpec(family, 2, 0.3)).boeckx
    lo, hi = {Family.SPHERE_TYPE: (1, math.inf), Family.HYPERBOLIC_TYPE: (-math.inf, -1), Family.PARA_TYPE: (-1, 1)}[family]
    assert lo < I < hi
