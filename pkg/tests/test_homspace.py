import numpy as np
import pytest

from kappamu import homspace as hs
from kappamu.liecore import OrderedBasis, bracket
from kappamu.models import ModelSpec, build_model

from conftest import GRID, model_data


def abelian_decomposition():
    def diag(i):
        D = np.zeros((4, 4))
        D[i, i] = 1.0
        return D

    return hs.ReductiveDecomposition(
        h=OrderedBasis(np.zeros((0, 4, 4))),
        xi=diag(0),
        p=OrderedBasis(np.array([diag(1)])),
        q=OrderedBasis(np.array([diag(2)])),
    )


@pytest.mark.parametrize("family,n,alpha", [(1, 2, 0.5), (2, 3, 0.3), (3, 5, 0.8)])
def test_models_are_symmetric_decompositions(family, n, alpha):
    d = build_model(ModelSpec(family, n, alpha)).decomposition
    assert max(hs.decomposition_residuals(d).values()) < 1e-12


def test_swapped_decomposition_witness():
    d = build_model(ModelSpec(1, 3, 0.5)).decomposition
    swapped = hs.ReductiveDecomposition(h=d.p, xi=d.xi, p=d.h, q=d.q)
    assert hs.decomposition_residuals(swapped)["b_b_in_hbar"] > 0.1


def test_abelian_toy_algebra():
    d = abelian_decomposition()
    assert max(hs.decomposition_residuals(d).values()) == 0
    conn = hs.levi_civita_connection(d, np.eye(3))
    assert np.abs(hs.levi_civita_curvature(conn, d)).max() == 0


def test_torsion_and_curvature_vanish_on_diagonal(sphere_model, rng):
    d = sphere_model["d"]
    X, Z = rng.standard_normal((2, d.dim_m))
    assert np.abs(hs.canonical_torsion(d, X, X)).max() < 1e-15
    assert np.abs(hs.canonical_curvature(d, X, X, Z)).max() < 1e-15


def test_canonical_curvature_commuting_pair():
    d = build_model(ModelSpec(1, 3, 0.5)).decomposition
    e = np.eye(d.dim_m)
    P0, Q1 = d.p.elements[0], d.q.elements[1]
    # v and w in disjoint slots commute in so(5)
    assert np.abs(bracket(P0, Q1)).max() == 0
    for z in range(d.dim_m):
        assert np.abs(hs.canonical_curvature(d, e[d.p_m[0]], e[d.q_m[1]], e[z])).max() == 0
    # two v-directions do not commute, so the curvature is nonzero
    assert np.abs(hs.canonical_curvature(d, e[d.p_m[0]], e[d.p_m[1]], e[d.p_m[0]])).max() > 0.5


def test_symmetric_variant_rejects_xi(sphere_model):
    d = sphere_model["d"]
    e = np.eye(d.dim_m)
    with pytest.raises(ValueError):
        hs.canonical_curvature(d, e[0], e[1], e[2], variant="symmetric")
    with pytest.raises(ValueError):
        hs.canonical_curvature(d, e[1], e[2], e[3], variant="bogus")


def test_symmetric_curvature_tensor_matches_pointwise(sphere_model):
    d = sphere_model["d"]
    Rb = hs.symmetric_base_curvature(d)
    e = np.eye(d.dim_m)
    for i, x in enumerate(d.b_m):
        for j, y in enumerate(d.b_m):
            for k, z in enumerate(d.b_m):
                v = hs.canonical_curvature(d, e[x], e[y], e[z], variant="symmetric")
                np.testing.assert_allclose(v[d.b_m], Rb[i, j, k], atol=1e-14)
                assert abs(v[0]) < 1e-14


@pytest.mark.parametrize("key", GRID[::5])
def test_levi_civita_and_curvature_symmetries(key):
    m = model_data(*key)
    res = hs.connection_residuals(m["conn"], m["d"], m["s"].g)
    assert max(res.values()) < 1e-12
    sym = hs.curvature_symmetry_residuals(m["R"], m["s"].g)
    assert max(sym.values()) < 1e-9


def test_curvature_symmetry_detects_corruption(sphere_model):
    R = sphere_model["R"].copy()
    R[1, 2, 1, 2] += 0.1
    assert hs.curvature_symmetry_residuals(R, sphere_model["s"].g)["skew_xy"] > 0.05


def test_difference_tensor_on_xi(sphere_model):
    s, d, h, conn = (sphere_model[k] for k in ("s", "d", "h", "conn"))
    A = conn.difference_tensor
    A_xi = np.einsum("xyl,y->lx", A, s.xi)[:, d.b_m]
    np.testing.assert_allclose(A_xi, (s.phi + s.phi @ h)[:, d.b_m], atol=1e-14)
