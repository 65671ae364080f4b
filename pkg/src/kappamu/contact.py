"""Contact metric tensors at the base point, the operator h, and (kappa, mu) fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg

from kappamu._validation import check_metric, check_positive
from kappamu.exceptions import NotKappaMuCandidateError, SasakianError
from kappamu.homspace import ConnectionAtO, ReductiveDecomposition

SASAKIAN_CUTOFF = 1e-7


@dataclass(frozen=True)
class ContactStructureAtO:
    """``(phi, xi, eta, g)`` on m; ``phi`` and ``g`` are matrices over the m-basis."""

    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        for name in ("phi", "xi", "eta", "g"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        check_metric(self.g)

    @property
    def dim(self) -> int:
        return len(self.xi)

    def inner(self, X, Y) -> float:
        return float(X @ self.g @ Y)


def verify_contact_metric(s: ContactStructureAtO, d: ReductiveDecomposition) -> dict[str, float]:
    """Residuals of the contact metric axioms over all basis pairs.

    ``2 d eta(X, Y) = -eta([X, Y]_m)`` at the base point.
    """
    dim = s.dim
    d_eta = -0.5 * np.einsum("xyk,k->xy", d.c_mm_m, s.eta)
    return {
        "eta_xi": abs(float(s.eta @ s.xi) - 1.0),
        "phi_squared": float(np.abs(s.phi @ s.phi + np.eye(dim) - np.outer(s.xi, s.eta)).max()),
        "compatibility": float(
            np.abs(s.phi.T @ s.g @ s.phi - s.g + np.outer(s.eta, s.eta)).max()
        ),
        "contact_condition": float(np.abs(d_eta - s.g @ s.phi).max()),
    }


def compute_h(s: ContactStructureAtO, d: ReductiveDecomposition) -> np.ndarray:
    """``h = 1/2 L_xi phi`` for invariant tensors.

    ``(L_xi phi) Y = -T~(xi, phi Y) + phi T~(xi, Y) = [xi, phi Y]_m - phi [xi, Y]_m``.
    """
    ad_xi = d.ad_m(s.xi)
    return 0.5 * (ad_xi @ s.phi - s.phi @ ad_xi)


@dataclass(frozen=True)
class HSplit:
    """Eigen-split of the contact distribution under h.

    ``plus`` and ``minus`` hold g-orthonormal eigenvectors (columns, in
    m-coordinates) for the eigenvalues ``+lam`` and ``-lam``.
    """

    lam: float
    plus: np.ndarray
    minus: np.ndarray

    @property
    def sasakian(self) -> bool:
        return self.lam <= SASAKIAN_CUTOFF


def h_residuals(h: np.ndarray, s: ContactStructureAtO) -> dict[str, float]:
    gh = s.g @ h
    return {
        "h_xi": float(np.abs(h @ s.xi).max()),
        "h_symmetric": float(np.abs(gh - gh.T).max()),
        "h_phi_anticommute": float(np.abs(h @ s.phi + s.phi @ h).max()),
        "h_trace": abs(float(np.trace(h))),
    }


def split_h(h: np.ndarray, s: ContactStructureAtO, tol: float = 1e-9) -> HSplit:
    """Split ``ker eta`` into the ``+lam`` / ``-lam`` eigenspaces of ``h``."""
    null = scipy.linalg.null_space(s.eta[None, :])
    g_D = null.T @ s.g @ null
    h_D = np.linalg.pinv(null) @ h @ null
    gh = g_D @ h_D
    evals, evecs = scipy.linalg.eigh(0.5 * (gh + gh.T), g_D)
    lam = float(np.abs(evals).max()) if len(evals) else 0.0
    half = len(evals) // 2
    if lam <= SASAKIAN_CUTOFF:
        return HSplit(lam=0.0, plus=np.zeros((s.dim, 0)), minus=np.zeros((s.dim, 0)))
    scale = tol * max(1.0, lam)
    pos = evals > 0
    if (
        len(evals) % 2
        or pos.sum() != half
        or np.abs(np.abs(evals) - lam).max() > scale
    ):
        raise NotKappaMuCandidateError(f"h eigenvalues {np.round(evals, 12)} are not a +-lambda pair pattern")
    vecs = null @ evecs
    return HSplit(lam=lam, plus=vecs[:, pos], minus=vecs[:, ~pos])


@dataclass(frozen=True)
class KappaMu:
    kappa: float
    mu: float | None
    lam: float
    boeckx: float | None
    fit_residual: float | None = None

    @property
    def sasakian(self) -> bool:
        return self.boeckx is None

    @classmethod
    def from_parameters(cls, kappa: float, mu: float, fit_residual: float | None = None) -> "KappaMu":
        if kappa >= 1:
            return cls(kappa=float(kappa), mu=float(mu), lam=0.0, boeckx=None, fit_residual=fit_residual)
        return cls(
            kappa=float(kappa),
            mu=float(mu),
            lam=math.sqrt(1.0 - kappa),
            boeckx=boeckx_invariant(kappa, mu),
            fit_residual=fit_residual,
        )


def kappa_mu_condition_residual(R: np.ndarray, s: ContactStructureAtO, h: np.ndarray, kappa: float, mu: float) -> float:
    """Max g-norm over basis pairs of
    ``R(X, Y) xi - kappa (eta(Y) X - eta(X) Y) - mu (eta(Y) hX - eta(X) hY)``."""
    Rxi = np.einsum("xyzl,z->xyl", R, s.xi)
    eye = np.eye(s.dim)
    ext = np.einsum("y,xl->xyl", s.eta, eye) - np.einsum("x,yl->xyl", s.eta, eye)
    hT = h.T  # row x is h E_x
    ext_h = np.einsum("y,xl->xyl", s.eta, hT) - np.einsum("x,yl->xyl", s.eta, hT)
    diff = Rxi - kappa * ext - mu * ext_h
    norms = np.einsum("xyl,lk,xyk->xy", diff, s.g, diff)
    return float(np.sqrt(np.clip(norms, 0, None)).max())


def fit_kappa_mu(R: np.ndarray, s: ContactStructureAtO, h: np.ndarray, split: HSplit | None = None) -> KappaMu:
    """Read off (kappa, mu) from ``R(X, xi) xi = kappa X + mu hX`` on one unit
    vector of each h-eigenspace, then check the full condition on every basis pair.

    A Sasakian structure (``lam`` below the cutoff) gives ``kappa = 1``, no mu
    and no Boeckx invariant; its residual is that of ``R(X, Y) xi = eta(Y) X - eta(X) Y``.
    """
    split = split_h(h, s) if split is None else split
    if split.sasakian:
        res = kappa_mu_condition_residual(R, s, h, 1.0, 0.0)
        return KappaMu(kappa=1.0, mu=None, lam=0.0, boeckx=None, fit_residual=res)

    def jacobi(X):
        return s.inner(np.einsum("x,xyzl,y,z->l", X, R, s.xi, s.xi), X) / s.inner(X, X)

    c_plus = jacobi(split.plus[:, 0])
    c_minus = jacobi(split.minus[:, 0])
    kappa = 0.5 * (c_plus + c_minus)
    mu = (c_plus - c_minus) / (2.0 * split.lam)
    res = kappa_mu_condition_residual(R, s, h, kappa, mu)
    return KappaMu.from_parameters(kappa, mu, fit_residual=res)


def boeckx_invariant(kappa: float, mu: float) -> float:
    """``I = (1 - mu/2) / sqrt(1 - kappa)``."""
    if kappa >= 1:
        raise SasakianError(f"Boeckx invariant undefined for kappa = {kappa} >= 1")
    return (1.0 - mu / 2.0) / math.sqrt(1.0 - kappa)


def d_homothetic(km: KappaMu, a: float) -> KappaMu:
    """(kappa, mu) after the D_a-homothetic deformation."""
    a = check_positive(a, "a")
    if km.mu is None:
        raise SasakianError("mu is undefined for a Sasakian structure")
    kappa = (km.kappa + a * a - 1.0) / (a * a)
    mu = (km.mu + 2.0 * a - 2.0) / a
    return KappaMu.from_parameters(kappa, mu)


def d_homothetic_structure(s: ContactStructureAtO, a: float) -> ContactStructureAtO:
    """``eta -> a eta``, ``xi -> xi / a``, ``g -> a g + a(a - 1) eta (x) eta``; phi unchanged."""
    a = check_positive(a, "a")
    return replace(
        s,
        eta=a * s.eta,
        xi=s.xi / a,
        g=a * s.g + a * (a - 1.0) * np.outer(s.eta, s.eta),
    )


def kmu_curvature_eval(km: KappaMu, s: ContactStructureAtO, h: np.ndarray) -> np.ndarray:
    """Closed-form curvature of a non-Sasakian (kappa, mu)-space, as ``R[x, y, z, l]``.

    Both unsigned continuation lines of the classical display (the ``hX, hY``
    and ``phi h X, phi h Y`` products) enter with a plus sign.
    """
    if km.kappa >= 1 or km.mu is None:
        raise SasakianError("closed-form curvature needs kappa < 1")
    kappa, mu = km.kappa, km.mu
    G = s.g
    gh = h.T @ G  # gh[a, b] = g(h E_a, E_b)
    gp = s.phi.T @ G
    gph = (s.phi @ h).T @ G
    e = s.eta

    def pair(A, B):
        # A(Y, Z) B(X, W) - A(X, Z) B(Y, W)
        return np.einsum("yz,xw->xyzw", A, B) - np.einsum("xz,yw->xyzw", A, B)

    Q = (kappa - 1.0 + mu / 2.0) * G + (mu - 1.0) * gh
    Rl = (
        (1.0 - mu / 2.0) * pair(G, G)
        + pair(G, gh)
        - np.einsum("yw,xz->xyzw", G, gh)
        + np.einsum("xw,yz->xyzw", G, gh)
        + (1.0 - mu / 2.0) / (1.0 - kappa) * pair(gh, gh)
        - mu / 2.0 * pair(gp, gp)
        + (kappa - mu / 2.0) / (1.0 - kappa) * pair(gph, gph)
        + mu * np.einsum("xy,zw->xyzw", gp, gp)
        + np.einsum("x,w,yz->xyzw", e, e, Q)
        - np.einsum("x,z,yw->xyzw", e, e, Q)
        + np.einsum("y,z,xw->xyzw", e, e, Q)
        - np.einsum("y,w,xz->xyzw", e, e, Q)
    )
    return np.einsum("xyzw,wl->xyzl", Rl, np.linalg.inv(G))


def eta_parallel_residual(
    conn: ConnectionAtO, s: ContactStructureAtO, h: np.ndarray, d: ReductiveDecomposition
) -> float:
    """Max ``|g((nabla_X h) Y, Z)|`` over basis triples of b.

    At o, ``(nabla_X h) Y = Lambda(X) hY - h Lambda(X) Y``; in terms of
    ``A = nabla~ - nabla`` this is ``-(A(X, hY) - h A(X, Y))``.
    """
    L = conn.Lambda.transpose(0, 2, 1)
    nabla_h = np.einsum("xlk,kj->xlj", L, h) - np.einsum("lk,xkj->xlj", h, L)
    vals = np.einsum("xly,lz->xyz", nabla_h, s.g)
    b = d.b_m
    return float(np.abs(vals[np.ix_(b, b, b)]).max())


def boeckx_t1m(c: float) -> float:
    """Boeckx invariant ``(1 + c) / |1 - c|`` of the unit tangent sphere bundle over a space form of curvature c."""
    if c == 1:
        raise ValueError("c = 1 gives a Sasakian tangent sphere bundle")
    return (1.0 + c) / abs(1.0 - c)
