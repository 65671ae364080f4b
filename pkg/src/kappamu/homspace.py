"""Reductive decompositions g = h + R xi + p + q and invariant connections at the base point.

Tangent vectors at the base point are coefficient vectors over the m-basis
``(xi, p_1, ..., p_k, q_1, ..., q_k)``.  Trilinear maps are arrays
``T[i, j, k, l]`` meaning ``T(E_i, E_j) E_k = sum_l T[i, j, k, l] E_l``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from kappamu._validation import check_metric
from kappamu.liecore import DEFAULT_TOL, OrderedBasis, structure_constants


@dataclass(frozen=True)
class ReductiveDecomposition:
    """``g = h + R xi + p + q`` with ``m = R xi + b``, ``b = p + q``, ``hbar = h + R xi``."""

    h: OrderedBasis
    xi: np.ndarray
    p: OrderedBasis
    q: OrderedBasis
    tol: float = DEFAULT_TOL

    @cached_property
    def full(self) -> OrderedBasis:
        xi = OrderedBasis(np.asarray(self.xi, dtype=float)[None], ("xi",))
        return self.h.concat(xi, self.p, self.q)

    @property
    def n_h(self) -> int:
        return len(self.h)

    @property
    def dim_m(self) -> int:
        return 1 + len(self.p) + len(self.q)

    # index sets into the full basis
    @property
    def h_idx(self) -> np.ndarray:
        return np.arange(self.n_h)

    @property
    def m_idx(self) -> np.ndarray:
        return np.arange(self.n_h, self.n_h + self.dim_m)

    @property
    def hbar_idx(self) -> np.ndarray:
        return np.arange(self.n_h + 1)

    @property
    def b_idx(self) -> np.ndarray:
        return np.arange(self.n_h + 1, self.n_h + self.dim_m)

    # index sets into m-coordinates
    @property
    def b_m(self) -> np.ndarray:
        return np.arange(1, self.dim_m)

    @property
    def p_m(self) -> np.ndarray:
        return np.arange(1, 1 + len(self.p))

    @property
    def q_m(self) -> np.ndarray:
        return np.arange(1 + len(self.p), self.dim_m)

    @cached_property
    def constants(self) -> np.ndarray:
        return structure_constants(self.full, tol=self.tol)

    @cached_property
    def c_mm_m(self) -> np.ndarray:
        """``[E_i, E_j]_m`` for m-basis elements, indexed ``[i, j, k]``."""
        m = self.m_idx
        return self.constants[np.ix_(m, m, m)]

    @cached_property
    def c_mm_h(self) -> np.ndarray:
        """``[E_i, E_j]_h`` for m-basis elements, indexed ``[i, j, a]``."""
        m = self.m_idx
        return self.constants[np.ix_(m, m, self.h_idx)]

    @cached_property
    def ad_h(self) -> np.ndarray:
        """``ad(H_a)`` restricted to m as matrices ``ad_h[a, k, j]``."""
        c = self.constants[np.ix_(self.h_idx, self.m_idx, self.m_idx)]
        return c.transpose(0, 2, 1)

    def ad_m(self, X) -> np.ndarray:
        """Matrix of ``Y -> [X, Y]_m`` on m."""
        return np.einsum("i,ijk->kj", np.asarray(X, dtype=float), self.c_mm_m)

    def bracket_m(self, X, Y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", X, Y, self.c_mm_m)

    def bracket_h(self, X, Y) -> np.ndarray:
        return np.einsum("i,j,ija->a", X, Y, self.c_mm_h)

    def to_matrix(self, X) -> np.ndarray:
        """Lie algebra matrix of an m-vector."""
        return self.full.combine(np.concatenate([np.zeros(self.n_h), X]))


def decomposition_residuals(d: ReductiveDecomposition) -> dict[str, float]:
    """Largest coefficient violating each inclusion of a reductive/symmetric decomposition."""
    c = d.constants

    def leak(rows, cols, outside):
        if len(rows) == 0 or len(cols) == 0 or len(outside) == 0:
            return 0.0
        return float(np.abs(c[np.ix_(rows, cols, outside)]).max())

    return {
        "h_m_in_m": leak(d.h_idx, d.m_idx, d.h_idx),
        "hbar_hbar_in_hbar": leak(d.hbar_idx, d.hbar_idx, d.b_idx),
        "hbar_b_in_b": leak(d.hbar_idx, d.b_idx, d.hbar_idx),
        "b_b_in_hbar": leak(d.b_idx, d.b_idx, d.b_idx),
        # m-part of [b, b] must be a multiple of xi
        "b_b_m_in_xi": leak(d.b_idx, d.b_idx, d.b_idx),
    }


def canonical_torsion(d: ReductiveDecomposition, X, Y) -> np.ndarray:
    """Torsion of the canonical connection at o: ``-[X, Y]_m``."""
    return -d.bracket_m(X, Y)


def canonical_curvature(d: ReductiveDecomposition, X, Y, Z, variant: str = "reductive") -> np.ndarray:
    """Curvature of a canonical connection at o.

    ``variant="reductive"`` gives ``-[[X, Y]_h, Z]`` on M = G/H.
    ``variant="symmetric"`` gives ``-[[X, Y]_hbar, Z]`` on the base G/Hbar and only
    accepts vectors of b (zero xi-component).
    """
    X, Y, Z = (np.asarray(v, dtype=float) for v in (X, Y, Z))
    out = -np.einsum("a,akj,j->k", d.bracket_h(X, Y), d.ad_h, Z)
    if variant == "reductive":
        return out
    if variant != "symmetric":
        raise ValueError(f"unknown variant {variant!r}")
    for v in (X, Y, Z):
        if abs(v[0]) > d.tol:
            raise ValueError("symmetric-base curvature takes vectors of b only (nonzero xi-component)")
    s = d.bracket_m(X, Y)[0]
    xi = np.zeros(d.dim_m)
    xi[0] = 1.0
    return out - s * d.bracket_m(xi, Z)


def canonical_curvature_tensor(d: ReductiveDecomposition) -> np.ndarray:
    """``-[[E_i, E_j]_h, E_k]`` over all m-basis triples."""
    return -np.einsum("xya,alz->xyzl", d.c_mm_h, d.ad_h)


def symmetric_base_curvature(d: ReductiveDecomposition) -> np.ndarray:
    """``Rbar(X, Y) Z = -[[X, Y]_hbar, Z]`` on b, in b-coordinates."""
    b = d.b_m
    xi = np.zeros(d.dim_m)
    xi[0] = 1.0
    ad_xi = d.ad_m(xi)
    R = canonical_curvature_tensor(d) - np.einsum("xy,lz->xyzl", d.c_mm_m[:, :, 0], ad_xi)
    return R[np.ix_(b, b, b, b)]


@dataclass(frozen=True)
class ConnectionAtO:
    """Connection function ``Lambda[i, j, l] = (Lambda(E_i) E_j)_l`` of an invariant connection."""

    Lambda: np.ndarray
    U: np.ndarray

    def operator(self, X) -> np.ndarray:
        return np.einsum("i,ijl->lj", np.asarray(X, dtype=float), self.Lambda)

    @property
    def difference_tensor(self) -> np.ndarray:
        """``A = nabla~ - nabla`` at o, i.e. ``A(X, Y) = -Lambda(X) Y``.

        The canonical connection function vanishes on m, hence the minus sign.
        """
        return -self.Lambda


def levi_civita_connection(d: ReductiveDecomposition, g) -> ConnectionAtO:
    """Levi-Civita connection function of an invariant metric ``g`` on m.

    ``Lambda(X) Y = 1/2 [X, Y]_m + U(X, Y)`` with
    ``2 g(U(X, Y), Z) = g([Z, X]_m, Y) + g(X, [Z, Y]_m)``.
    """
    g = check_metric(g, "gram matrix")
    C = d.c_mm_m
    U_low = 0.5 * (np.einsum("zxk,ky->xyz", C, g) + np.einsum("xk,zyk->xyz", g, C))
    U = np.einsum("xyz,zl->xyl", U_low, np.linalg.inv(g))
    return ConnectionAtO(Lambda=0.5 * C + U, U=U)


def connection_residuals(conn: ConnectionAtO, d: ReductiveDecomposition, g) -> dict[str, float]:
    L = conn.Lambda
    Lg = np.einsum("xyl,lz->xyz", L, g)
    return {
        "metric_compatibility": float(np.abs(Lg + Lg.transpose(0, 2, 1)).max()),
        "torsion_free": float(np.abs(L - L.transpose(1, 0, 2) - d.c_mm_m).max()),
    }


def levi_civita_curvature(conn: ConnectionAtO, d: ReductiveDecomposition) -> np.ndarray:
    """``R(X, Y) = [Lambda(X), Lambda(Y)] - Lambda([X, Y]_m) - ad([X, Y]_h)`` at o.

    Sign convention ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``.
    """
    L = conn.Lambda.transpose(0, 2, 1)  # L[x] is the matrix of Lambda(E_x)
    LL = np.einsum("xlk,ykz->xylz", L, L)
    R = (
        LL
        - LL.transpose(1, 0, 2, 3)
        - np.einsum("xyk,klz->xylz", d.c_mm_m, L)
        - np.einsum("xya,alz->xylz", d.c_mm_h, d.ad_h)
    )
    return R.transpose(0, 1, 3, 2)


def curvature_symmetry_residuals(R: np.ndarray, g: np.ndarray) -> dict[str, float]:
    """Residuals of the Riemannian curvature symmetries of ``R[x, y, z, l]``."""
    Rl = np.einsum("xyzl,lw->xyzw", R, g)
    return {
        "skew_xy": float(np.abs(R + R.transpose(1, 0, 2, 3)).max()),
        "skew_zw": float(np.abs(Rl + Rl.transpose(0, 1, 3, 2)).max()),
        "bianchi": float(np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)).max()),
        "pair_symmetry": float(np.abs(Rl - Rl.transpose(2, 3, 0, 1)).max()),
    }
