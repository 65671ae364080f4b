import functools
import sys

import numpy as np
import pytest

from kappamu import contact as ct
from kappamu import homspace as hs
from kappamu.models import ModelSpec, build_model

GRID = [(f, n, a) for f in (1, 2, 3) for n in (1, 2, 3, 5) for a in (0.3, 0.5, 0.8)]


@functools.lru_cache(maxsize=None)
def model_data(family, n, alpha):
    """Built model with h, its split, the Levi-Civita connection, curvature and (kappa, mu)."""
    bundle = build_model(ModelSpec(family, n, alpha))
    d, s = bundle.decomposition, bundle.contact
    h = ct.compute_h(s, d)
    split = ct.split_h(h, s)
    conn = hs.levi_civita_connection(d, s.g)
    R = hs.levi_civita_curvature(conn, d)
    km = ct.fit_kappa_mu(R, s, h, split)
    return dict(bundle=bundle, d=d, s=s, h=h, split=split, conn=conn, R=R, km=km)


@pytest.fixture
def sphere_model():
    return model_data(1, 2, 0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.VERDICTS, key=_criterion_order):
        terminalreporter.write_line(line)


def _criterion_order(line):
    num = line.split()[2].rstrip(":")
    return (int(num.rstrip("ab")), num)
