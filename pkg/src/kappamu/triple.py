"""Lie and Jordan triple systems and the (para-)complex structures of the base space.

Products are arrays ``P[i, j, k, l]`` with ``[E_i, E_j, E_k] = sum_l P[i, j, k, l] E_l``.
Curvature and bracket are related by ``R(X, Y) Z = -[X, Y, Z]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from kappamu.contact import ContactStructureAtO, HSplit, KappaMu
from kappamu.exceptions import BoundaryInvariantError, SasakianError

FULL_SCAN_MAX_DIM = 10
N_SAMPLES = 2000


@dataclass(frozen=True)
class TripleSystem:
    product: np.ndarray
    kind: Literal["LTS", "JTS"]

    def __post_init__(self):
        P = np.asarray(self.product, dtype=float)
        if P.ndim != 4 or len(set(P.shape)) != 1:
            raise ValueError(f"product must be a (d, d, d, d) array, got {P.shape}")
        if self.kind not in ("LTS", "JTS"):
            raise ValueError(f"kind must be 'LTS' or 'JTS', got {self.kind!r}")
        object.__setattr__(self, "product", P)

    @property
    def dim(self) -> int:
        return self.product.shape[0]

    def __call__(self, x, y, z) -> np.ndarray:
        return np.einsum("i,j,k,ijkl->l", x, y, z, self.product)

    def __neg__(self) -> "TripleSystem":
        return TripleSystem(-self.product, self.kind)

    def __mul__(self, c: float) -> "TripleSystem":
        return TripleSystem(c * self.product, self.kind)

    __rmul__ = __mul__


@dataclass(frozen=True)
class StructureOperator:
    matrix: np.ndarray
    kind: Literal["complex", "para-complex", "involution"]

    def square_residual(self) -> float:
        M = self.matrix
        target = -np.eye(len(M)) if self.kind == "complex" else np.eye(len(M))
        return float(np.abs(M @ M - target).max())

    def eigenspace_balance(self) -> int:
        """``dim E(+1) - dim E(-1)``; zero for para-complex structures and for tau."""
        if self.kind == "complex":
            return 0
        evals = np.linalg.eigvals(self.matrix).real
        return int((evals > 0).sum() - (evals < 0).sum())


def sphere_lts(dim: int, G=None) -> TripleSystem:
    """``[x, y, z] = -R(x, y) z`` with ``R(x, y) z = <y, z> x - <x, z> y``."""
    G = np.eye(dim) if G is None else np.asarray(G, dtype=float)
    eye = np.eye(dim)
    R = np.einsum("yz,xl->xyzl", G, eye) - np.einsum("xz,yl->xyzl", G, eye)
    return TripleSystem(-R, "LTS")


def sphere_jts(dim: int, G=None) -> TripleSystem:
    """``T(x, y) z = <x, z> y - <x, y> z - <y, z> x``."""
    G = np.eye(dim) if G is None else np.asarray(G, dtype=float)
    eye = np.eye(dim)
    T = (
        np.einsum("xz,yl->xyzl", G, eye)
        - np.einsum("xy,zl->xyzl", G, eye)
        - np.einsum("yz,xl->xyzl", G, eye)
    )
    return TripleSystem(T, "JTS")


def curvature_of(ts: TripleSystem) -> np.ndarray:
    return -ts.product


def _compose(P: np.ndarray, Q: np.ndarray):
    """Terms of the derivation law ``P(u, v, Q(x, y, z))`` etc., over all 5-tuples."""
    outer = np.einsum("uvml,xyzm->uvxyzl", P, Q)
    first = np.einsum("uvxm,myzl->uvxyzl", P, Q)
    middle = np.einsum("uvym,xmzl->uvxyzl", P, Q)
    last = np.einsum("uvzm,xyml->uvxyzl", P, Q)
    return outer, first, middle, last


def _sampled_compose(P: np.ndarray, seed: int, n_samples: int):
    rng = np.random.default_rng(seed)
    u, v, x, y, z = rng.standard_normal((5, n_samples, P.shape[0]))

    def tri(a, b, c):
        return np.einsum("si,sj,sk,ijkl->sl", a, b, c, P)

    return tri, (u, v, x, y, z)


def lts_residuals(ts: TripleSystem, seed: int = 0) -> dict[str, float]:
    P = ts.product
    d = ts.dim
    out = {
        "alternating": float(np.abs(P + P.transpose(1, 0, 2, 3)).max()),
        "cyclic": float(np.abs(P + P.transpose(1, 2, 0, 3) + P.transpose(2, 0, 1, 3)).max()),
    }
    if d <= FULL_SCAN_MAX_DIM:
        outer, first, middle, last = _compose(P, P)
        out["derivation"] = float(np.abs(outer - first - middle - last).max())
    else:
        tri, (u, v, x, y, z) = _sampled_compose(P, seed, N_SAMPLES)
        lhs = tri(u, v, tri(x, y, z))
        rhs = tri(tri(u, v, x), y, z) + tri(x, tri(u, v, y), z) + tri(x, y, tri(u, v, z))
        scale = np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1) * np.linalg.norm(x, axis=1) * np.linalg.norm(y, axis=1) * np.linalg.norm(z, axis=1)
        out["derivation"] = float((np.abs(lhs - rhs).max(axis=1) / scale).max())
    return out


def jts_residuals(ts: TripleSystem, seed: int = 0) -> dict[str, float]:
    """(JT1) ``T(x, y) z = T(z, y) x`` and (JT2) in the form
    ``T(u, v) T(x, y, z) = T(T(u, v) x, y, z) - T(x, T(v, u) y, z) + T(x, y, T(u, v) z)``."""
    T = ts.product
    out = {"jt1": float(np.abs(T - T.transpose(2, 1, 0, 3)).max())}
    if ts.dim <= FULL_SCAN_MAX_DIM:
        outer, first, _, last = _compose(T, T)
        middle_vu = np.einsum("vuym,xmzl->uvxyzl", T, T)
        out["jt2"] = float(np.abs(outer - first + middle_vu - last).max())
    else:
        tri, (u, v, x, y, z) = _sampled_compose(T, seed, N_SAMPLES)
        lhs = tri(u, v, tri(x, y, z))
        rhs = tri(tri(u, v, x), y, z) - tri(x, tri(v, u, y), z) + tri(x, y, tri(u, v, z))
        out["jt2"] = float(np.abs(lhs - rhs).max())
    return out


def axiom_residual(ts: TripleSystem, seed: int = 0) -> float:
    """Worst residual of the LTS or JTS axioms, according to ``ts.kind``."""
    res = lts_residuals(ts, seed) if ts.kind == "LTS" else jts_residuals(ts, seed)
    return max(res.values())


def lts_from_jts(ts: TripleSystem) -> TripleSystem:
    """``[x, y, z] = T(x, y) z - T(y, x) z``."""
    T = ts.product
    return TripleSystem(T - T.transpose(1, 0, 2, 3), "LTS")


def jordan_curvature(ts: TripleSystem) -> np.ndarray:
    """``R_T(x, y) = -T(x, y) + T(y, x)``."""
    T = ts.product
    return -T + T.transpose(1, 0, 2, 3)


def invariance_residuals(ts: TripleSystem, S: StructureOperator) -> dict[str, float]:
    """Residuals of ``[X, Y, JZ] = J[X, Y, Z]`` and of the straight and twisted laws."""
    P = ts.product
    J = S.matrix
    PJz = np.einsum("xyml,mz->xyzl", P, J)
    JP = np.einsum("xyzm,lm->xyzl", P, J)
    PJx = np.einsum("myzl,mx->xyzl", P, J)
    PJy = np.einsum("xmzl,my->xyzl", P, J)
    return {
        "invariant": float(np.abs(PJz - JP).max()),
        "straight": float(np.abs(PJx - PJy).max()),
        "twisted": float(np.abs(PJx + PJy).max()),
    }


def _restrict(M: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.linalg.pinv(basis) @ M @ basis


def _bplus_projectors(split: HSplit, b: np.ndarray, g_b: np.ndarray):
    """g-orthogonal projectors onto b+ and b- as matrices on b-coordinates."""
    plus = split.plus[b]
    minus = split.minus[b]
    return plus @ plus.T @ g_b, minus @ minus.T @ g_b


def standard_operator(kind: str, a: float, s: ContactStructureAtO, split: HSplit, b: np.ndarray) -> StructureOperator:
    """``a phi`` on b+ and ``+-(1/a) phi`` on b- (plus for complex, minus for para-complex)."""
    if kind not in ("complex", "para-complex"):
        raise ValueError(f"unknown kind {kind!r}")
    phi_b = s.phi[np.ix_(b, b)]
    Pp, Pm = _bplus_projectors(split, b, s.g[np.ix_(b, b)])
    sign = 1.0 if kind == "complex" else -1.0
    return StructureOperator(phi_b @ (a * Pp + sign / a * Pm), kind)


def standard_constant(I: float, tol: float = 1e-9) -> tuple[str, float]:
    """Kind and constant ``a`` of the standard structure for Boeckx invariant ``I``."""
    if abs(abs(I) - 1.0) <= tol:
        raise BoundaryInvariantError("no standard structure for |I| = 1")
    if abs(I) > 1:
        return "complex", math.sqrt((I + 1.0) / (I - 1.0))
    return "para-complex", math.sqrt(-(I + 1.0) / (I - 1.0))


def standard_structure_solve(
    km: KappaMu, s: ContactStructureAtO, split: HSplit, b: np.ndarray
) -> tuple[str, float, StructureOperator]:
    if km.boeckx is None or split.sasakian:
        raise SasakianError("standard structures need lambda > 0")
    kind, a = standard_constant(km.boeckx)
    return kind, a, standard_operator(kind, a, s, split, b)


def base_curvature_formula(km: KappaMu, s: ContactStructureAtO, h: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Closed-form curvature ``Rbar[x, y, z, l]`` of the symmetric base on b (b-coordinates)."""
    if km.mu is None or km.kappa >= 1:
        raise SasakianError("base curvature formula needs kappa < 1")
    c = (1.0 - km.mu / 2.0)
    r = c / (1.0 - km.kappa)
    ix = np.ix_(b, b)
    G = s.g[ix]
    H = h[ix]
    F = s.phi[ix]
    FH = F @ H
    gH = H.T @ G
    gF = F.T @ G
    gFH = FH.T @ G
    eye = np.eye(len(b))

    def term(coef_yz, op):
        # coef(Y, Z) op X - coef(X, Z) op Y, with op X = op[:, x]
        return np.einsum("yz,lx->xyzl", coef_yz, op) - np.einsum("xz,ly->xyzl", coef_yz, op)

    return (
        term(c * G + gH, eye)
        + term(r * gH + G, H)
        + term(c * gF + gFH, F)
        + term(r * gFH + gF, FH)
        + (km.mu - 2.0) * np.einsum("xy,lz->xyzl", gF, F)
        - 2.0 * np.einsum("xy,lz->xyzl", gF, FH)
    )


@dataclass(frozen=True)
class TauReport:
    tau: StructureOperator
    tau_squared: float
    automorphism: float
    anticommutation: float | None
    fixed: TripleSystem
    fixed_basis: np.ndarray
    sphere_coefficient: float | None
    sphere_residual: float


def tau_and_fixed_subsystem(
    ts: TripleSystem, h_b: np.ndarray, lam: float, g_b: np.ndarray, J: StructureOperator | None = None
) -> TauReport:
    """The involution ``tau = h / lam`` of b and the LTS it fixes.

    The fixed subsystem is written in a g-orthonormal basis of b+, where it is
    compared with a multiple of the sphere bracket.
    """
    if lam <= 0:
        raise SasakianError("tau needs lambda > 0")
    tau = h_b / lam
    P = ts.product
    image = np.einsum("xyzm,lm->xyzl", P, tau)
    args = np.einsum("abcl,ax,by,cz->xyzl", P, tau, tau, tau)
    evals, evecs = np.linalg.eig(tau)
    fixed = evecs[:, np.abs(evals - 1.0) < 1e-6].real
    # g-orthonormalize
    gram = fixed.T @ g_b @ fixed
    fixed = fixed @ np.linalg.inv(np.linalg.cholesky(gram)).T
    Pf = np.einsum("abcm,ax,by,cz,lm->xyzl", P, fixed, fixed, fixed, fixed.T @ g_b)
    sphere = sphere_lts(fixed.shape[1]).product
    denom = float(np.sum(sphere * sphere))
    # on a line the sphere bracket vanishes and no coefficient is identifiable
    coef = float(np.sum(Pf * sphere) / denom) if denom else None
    return TauReport(
        tau=StructureOperator(tau, "involution"),
        tau_squared=float(np.abs(tau @ tau - np.eye(len(tau))).max()),
        automorphism=float(np.abs(image - args).max()),
        anticommutation=None if J is None else float(np.abs(tau @ J.matrix + J.matrix @ tau).max()),
        fixed=TripleSystem(Pf, "LTS"),
        fixed_basis=fixed,
        sphere_coefficient=coef,
        sphere_residual=float(np.abs(Pf - (coef or 0.0) * sphere).max()),
    )


def structure_tensor(ts: TripleSystem, S: StructureOperator) -> np.ndarray:
    """``T(X, Y) Z = -1/2 (R(X, Y) Z - S R(X, S^-1 Y) Z)`` with ``R = -[ , , ]``."""
    R = curvature_of(ts)
    J = S.matrix
    Jinv = np.linalg.inv(J)
    RJ = np.einsum("xmzk,my,lk->xyzl", R, Jinv, J)
    return -0.5 * (R - RJ)


def jordan_extension(ts: TripleSystem, S: StructureOperator, fixed_basis: np.ndarray, g_b: np.ndarray) -> TripleSystem:
    """Structure tensor of ``S`` restricted to b+ (the span of ``fixed_basis``), as a JTS."""
    T = structure_tensor(ts, S)
    B = fixed_basis
    Tp = np.einsum("abcm,ax,by,cz,lm->xyzl", T, B, B, B, np.linalg.pinv(B))
    return TripleSystem(Tp, "JTS")


BASE_LABELS = {
    "sphere": ("SO(n+2)/SO(n)", "SO(n+2)/(SO(n)×SO(2))", "complexification of S^n"),
    "para": ("SO(n+1,1)/SO(n)", "SO(n+1,1)/(SO(n)×SO(1,1))", "para-complexification of S^n"),
    "hyperbolic": ("SO(n,2)/SO(n)", "SO(n,2)/(SO(n)×SO(2))", "complexification of H^n"),
}


def _format_label(label: str, n: int | None) -> str:
    if n is None:
        return label
    return (
        label.replace("n+2", str(n + 2))
        .replace("n+1", str(n + 1))
        .replace("(n,", f"({n},")
        .replace("(n)", f"({n})")
        .replace("^n", f"^{n}")
    )


@dataclass(frozen=True)
class BaseLabel:
    key: str
    model_space: str
    base_space: str
    type: str

    def as_dict(self) -> dict[str, str]:
        return {"model_space": self.model_space, "base_space": self.base_space, "type": self.type}


def classify_base(I: float, n: int | None = None, tol: float = 1e-9) -> BaseLabel:
    """Symmetric base space for Boeckx invariant ``I``.

    ``I > 1``: complexification of the sphere; ``-1 < I < 1``: its
    para-complexification; ``I < -1``: complexification of hyperbolic space.
    """
    if abs(abs(I) - 1.0) <= tol:
        raise BoundaryInvariantError(f"unclassified boundary |I| = 1 (I = {I})")
    key = "sphere" if I > 1 else ("para" if I > -1 else "hyperbolic")
    model, base, kind = BASE_LABELS[key]
    return BaseLabel(key, _format_label(model, n), _format_label(base, n), _format_label(kind, n))
