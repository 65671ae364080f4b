"""Homogeneous models SO(n+2)/SO(n), SO(n,2)/SO(n), SO(n+1,1)/SO(n) and their verification."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.linalg

from kappamu import contact as ct
from kappamu import homspace as hs
from kappamu import triple as tr
from kappamu._validation import check_int, check_positive
from kappamu.exceptions import BoundaryInvariantError, KappaMuError
from kappamu.liecore import OrderedBasis, coordinates, jacobi_residual, orthogonality_residual, quadratic_form

logger = logging.getLogger(__name__)

D_HOMOTHETIC_FACTORS = (0.5, 2.0, 7.0)


class Family(str, Enum):
    SPHERE_TYPE = "so_n_plus_2"
    HYPERBOLIC_TYPE = "so_n_2"
    PARA_TYPE = "so_n_plus_1_1"

    @property
    def index(self) -> int:
        return {"so_n_plus_2": 1, "so_n_2": 2, "so_n_plus_1_1": 3}[self.value]

    @property
    def base_key(self) -> str:
        return {1: "sphere", 2: "hyperbolic", 3: "para"}[self.index]

    def signature(self, n: int) -> tuple[int, int]:
        """(positive, negative) counts of the ambient quadratic form."""
        return {1: (n + 2, 0), 2: (n, 2), 3: (n + 1, 1)}[self.index]

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, cls):
            return value
        aliases = {
            "1": cls.SPHERE_TYPE, "sphere": cls.SPHERE_TYPE, "sphere-type": cls.SPHERE_TYPE,
            "2": cls.HYPERBOLIC_TYPE, "hyperbolic": cls.HYPERBOLIC_TYPE, "hyperbolic-type": cls.HYPERBOLIC_TYPE,
            "3": cls.PARA_TYPE, "para": cls.PARA_TYPE, "para-type": cls.PARA_TYPE,
        }
        key = str(value).strip().lower()
        if key in aliases:
            return aliases[key]
        return cls(key)


@dataclass(frozen=True)
class ModelSpec:
    family: Family
    n: int
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        object.__setattr__(self, "n", check_int(self.n, "n", 1))
        object.__setattr__(self, "alpha", check_positive(self.alpha, "alpha"))

    @property
    def sasakian(self) -> bool:
        return self.family is not Family.PARA_TYPE and self.alpha == 1.0

    def as_dict(self) -> dict:
        return {"family": self.family.value, "n": self.n, "alpha": self.alpha}


@dataclass(frozen=True)
class ModelBundle:
    spec: ModelSpec
    decomposition: hs.ReductiveDecomposition
    contact: ct.ContactStructureAtO
    base_structure: tr.StructureOperator
    base_metric: np.ndarray
    form: np.ndarray


def _unit(N: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((N, N))
    E[i, j] = 1.0
    return E


def build_model(spec: ModelSpec) -> ModelBundle:
    """Matrix model of the reductive decomposition and the invariant contact metric structure.

    Basis order: so(n) pairs, xi, the v-directions (p), the w-directions (q).
    """
    n, alpha, i = spec.n, spec.alpha, spec.family.index
    N = n + 2
    E = lambda a, b: _unit(N, a, b)  # noqa: E731

    h = [E(2 + l, 2 + k) - E(2 + k, 2 + l) for k in range(n) for l in range(k + 1, n)]
    h_labels = [f"a{k}{l}" for k in range(n) for l in range(k + 1, n)]
    if i == 3:
        xi = E(0, 1) + E(1, 0)
        top = (1.0, -1.0)  # top-right rows (v^T, -w^T)
    else:
        xi = E(1, 0) - E(0, 1)
        top = (-1.0, -1.0) if i == 1 else (1.0, 1.0)
    p = [E(2 + k, 0) + top[0] * E(0, 2 + k) for k in range(n)]
    q = [E(2 + k, 1) + top[1] * E(1, 2 + k) for k in range(n)]

    h_basis = OrderedBasis(np.array(h).reshape(len(h), N, N), tuple(h_labels))
    d = hs.ReductiveDecomposition(
        h=h_basis,
        xi=xi,
        p=OrderedBasis(np.array(p), tuple(f"v{k}" for k in range(n))),
        q=OrderedBasis(np.array(q), tuple(f"w{k}" for k in range(n))),
    )

    # base structure on b = p + q: J_i(v, w) = (-1)^i (w, -v), resp. I(v, w) = (w, v)
    Z, I_n = np.zeros((n, n)), np.eye(n)
    if i == 3:
        J = np.block([[Z, I_n], [I_n, Z]])
        kind = "para-complex"
        G = np.diag([1.0] * n + [-1.0] * n)
        scale = np.diag([alpha] * n + [-1.0 / alpha] * n)
    else:
        J = (-1) ** i * np.block([[Z, I_n], [-I_n, Z]])
        kind = "complex"
        G = np.eye(2 * n)
        scale = np.diag([alpha] * n + [1.0 / alpha] * n)

    dim_m = 2 * n + 1
    phi = np.zeros((dim_m, dim_m))
    phi[1:, 1:] = J @ scale
    g = np.diag([1.0] + [alpha / 2.0] * n + [1.0 / (2.0 * alpha)] * n)
    e0 = np.eye(dim_m)[0]
    s = ct.ContactStructureAtO(phi=phi, xi=e0, eta=e0, g=g)
    return ModelBundle(
        spec=spec,
        decomposition=d,
        contact=s,
        base_structure=tr.StructureOperator(J, kind),
        base_metric=G,
        form=quadratic_form(spec.family.signature(n)),
    )


def closed_form_h(spec: ModelSpec) -> np.ndarray:
    """``h`` on m from the explicit formulas for ``2h(v, w)``."""
    n, alpha, i = spec.n, spec.alpha, spec.family.index
    if i == 3:
        c = -(alpha**2 + 1.0) / alpha
    else:
        c = (-1) ** i * (alpha**2 - 1.0) / alpha
    return 0.5 * np.diag([0.0] + [c] * n + [-c] * n)


def closed_form_invariant(spec: ModelSpec) -> float | None:
    """Boeckx invariant of the model; ``None`` marks the Sasakian cases.

    Families 1 and 2 are symmetric under ``alpha -> 1/alpha``, so the formula is
    evaluated at ``min(alpha, 1/alpha)``.
    """
    alpha = spec.alpha
    if spec.family is Family.PARA_TYPE:
        return (alpha**2 - 1.0) / (alpha**2 + 1.0)
    if spec.sasakian:
        return None
    beta2 = min(alpha, 1.0 / alpha) ** 2
    value = (1.0 + beta2) / (1.0 - beta2)
    return value if spec.family is Family.SPHERE_TYPE else -value


def family_for_invariant(I: float, tol: float = 1e-9) -> Family:
    if abs(abs(I) - 1.0) <= tol:
        raise BoundaryInvariantError(f"unclassified boundary |I| = 1 (I = {I})")
    if I > 1:
        return Family.SPHERE_TYPE
    return Family.PARA_TYPE if I > -1 else Family.HYPERBOLIC_TYPE


def alpha_for_invariant(family, I: float) -> float:
    """Inverse of :func:`closed_form_invariant`: alpha in (0, 1) for families 1-2, alpha > 0 for family 3."""
    family = Family.parse(family)
    ranges = {
        Family.SPHERE_TYPE: (1.0, math.inf),
        Family.HYPERBOLIC_TYPE: (-math.inf, -1.0),
        Family.PARA_TYPE: (-1.0, 1.0),
    }
    lo, hi = ranges[family]
    if not lo < I < hi:
        raise ValueError(f"invariant {I} outside the range ({lo}, {hi}) of {family.value}")
    if family is Family.SPHERE_TYPE:
        return math.sqrt((I - 1.0) / (I + 1.0))
    if family is Family.HYPERBOLIC_TYPE:
        return math.sqrt((I + 1.0) / (I - 1.0))
    return math.sqrt((1.0 + I) / (1.0 - I))


def ad_action(bundle: ModelBundle, A: np.ndarray) -> tuple[np.ndarray, float]:
    """Matrix of ``Ad(A)`` on m and the largest coefficient it leaks into h."""
    d = bundle.decomposition
    A_inv = np.linalg.inv(A)
    cols, leak = [], 0.0
    for j in range(d.dim_m):
        X = d.to_matrix(np.eye(d.dim_m)[j])
        c = coordinates(A @ X @ A_inv, d.full)
        leak = max(leak, float(np.abs(c[: d.n_h]).max()) if d.n_h else 0.0)
        cols.append(c[d.n_h:])
    return np.array(cols).T, leak


def ad_invariance_residual_for(bundle: ModelBundle, A: np.ndarray) -> float:
    """Deviation of phi, g, eta and xi under conjugation by the group element ``A``."""
    s = bundle.contact
    Ad, leak = ad_action(bundle, A)
    return max(
        leak,
        float(np.abs(Ad @ s.phi - s.phi @ Ad).max()),
        float(np.abs(Ad.T @ s.g @ Ad - s.g).max()),
        float(np.abs(s.eta @ Ad - s.eta).max()),
        float(np.abs(Ad @ s.xi - s.xi).max()),
    )


def random_isotropy_elements(n: int, samples: int, seed: int) -> list[np.ndarray]:
    """``diag(I_2, exp(W))`` for random skew ``W`` in so(n)."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(samples):
        M = rng.standard_normal((n, n))
        a = scipy.linalg.expm(0.5 * (M - M.T))
        out.append(scipy.linalg.block_diag(np.eye(2), a))
    return out


def ad_invariance_residual(bundle: ModelBundle, samples: int = 10, seed: int = 0) -> float:
    check_int(samples, "samples", 1)
    elements = random_isotropy_elements(bundle.spec.n, samples, seed)
    return max(ad_invariance_residual_for(bundle, A) for A in elements)


@dataclass(frozen=True)
class Tolerances:
    default: float = 1e-9
    structural: float = 1e-10
    curvature: float = 1e-8
    boeckx: float = 1e-8
    deformation: float = 1e-10
    uniqueness: float = 1e-3

    @classmethod
    def with_default(cls, tol: float) -> "Tolerances":
        return cls(default=tol)


@dataclass
class Report:
    spec: ModelSpec
    residuals: dict[str, float] = field(default_factory=dict)
    thresholds: dict[str, tuple[str, float]] = field(default_factory=dict)
    kappa: float | None = None
    mu: float | None = None
    lam: float | None = None
    boeckx: float | None = None
    boeckx_closed_form: float | None = None
    base: dict | None = None
    standard_structure: dict | None = None
    errors: list[str] = field(default_factory=list)

    def check(self, name: str, value: float, threshold: float, mode: str = "max") -> None:
        self.residuals[name] = float(value)
        self.thresholds[name] = (mode, threshold)

    @property
    def failed(self) -> list[str]:
        out = []
        for name, value in self.residuals.items():
            mode, thr = self.thresholds[name]
            ok = value <= thr if mode == "max" else value >= thr
            if not ok or not np.isfinite(value):
                out.append(name)
        return out

    @property
    def sasakian(self) -> bool:
        return self.spec.sasakian

    @property
    def passed(self) -> bool:
        if self.errors or self.failed:
            return False
        if self.boeckx is None or self.boeckx_closed_form is None:
            return self.sasakian
        return abs(self.boeckx - self.boeckx_closed_form) < 1e-8

    def as_dict(self) -> dict:
        return {
            "spec": self.spec.as_dict(),
            "sasakian": self.sasakian,
            "residuals": dict(self.residuals),
            "kappa": self.kappa,
            "mu": self.mu,
            "lambda": self.lam,
            "boeckx": self.boeckx,
            "boeckx_closed_form": self.boeckx_closed_form,
            "base": self.base,
            "standard_structure": self.standard_structure,
            "failed": self.failed,
            "errors": list(self.errors),
            "pass": self.passed,
        }


def verify_model(
    spec: ModelSpec,
    tolerances: Tolerances | None = None,
    samples: int = 10,
    seed: int = 0,
) -> Report:
    """Build the model and run every check, collecting residuals into a :class:`Report`.

    A failing stage is recorded in ``Report.errors``; later stages still run
    when they do not depend on it.
    """
    tol = tolerances or Tolerances()
    report = Report(spec=spec)
    report.boeckx_closed_form = closed_form_invariant(spec)
    state: dict = {}

    def stage(name, fn):
        try:
            fn()
            return True
        except (KappaMuError, ValueError, np.linalg.LinAlgError, KeyError) as exc:
            logger.warning("%s: stage %s failed: %s", spec, name, exc)
            report.errors.append(f"{name}: {exc}")
            return False

    def structural():
        bundle = build_model(spec)
        d = bundle.decomposition
        state.update(bundle=bundle, d=d, s=bundle.contact)
        report.check(
            "liecore.orthogonality",
            max(orthogonality_residual(X, bundle.form) for X in d.full.elements),
            tol.structural,
        )
        report.check("liecore.jacobi", jacobi_residual(d.constants), tol.structural)
        for k, v in hs.decomposition_residuals(d).items():
            report.check(f"decomposition.{k}", v, tol.structural)
        for k, v in ct.verify_contact_metric(bundle.contact, d).items():
            report.check(f"contact.{k}", v, tol.structural)
        J = bundle.base_structure
        report.check("model_structure.square", J.square_residual(), tol.structural)

    def operator_h():
        s, d = state["s"], state["d"]
        h = ct.compute_h(s, d)
        state["h"] = h
        for k, v in ct.h_residuals(h, s).items():
            report.check(f"h.{k}", v, tol.structural)
        report.check("h.closed_form", float(np.abs(h - closed_form_h(spec)).max()), tol.structural)
        state["split"] = ct.split_h(h, s, tol.default)

    def riemannian():
        s, d = state["s"], state["d"]
        conn = hs.levi_civita_connection(d, s.g)
        R = hs.levi_civita_curvature(conn, d)
        state.update(conn=conn, R=R)
        for k, v in hs.connection_residuals(conn, d, s.g).items():
            report.check(f"levi_civita.{k}", v, tol.structural)
        for k, v in hs.curvature_symmetry_residuals(R, s.g).items():
            report.check(f"curvature.{k}", v, tol.default)
        # A(X, xi) = phi X + phi h X on b
        A = conn.difference_tensor
        b = d.b_m
        A_xi = np.einsum("xyl,y->lx", A, s.xi)[:, b]
        target = (s.phi + s.phi @ state["h"])[:, b]
        report.check("levi_civita.A_xi", float(np.abs(A_xi - target).max()), tol.structural)

    def kappa_mu():
        s, h, split, R = state["s"], state["h"], state["split"], state["R"]
        km = ct.fit_kappa_mu(R, s, h, split)
        state["km"] = km
        report.kappa, report.mu, report.lam, report.boeckx = km.kappa, km.mu, split.lam, km.boeckx
        if km.sasakian:
            report.check("sasakian.condition", km.fit_residual, tol.curvature)
            return
        report.check("kappa_mu.fit_residual", km.fit_residual, tol.curvature)
        report.check("kappa_mu.kappa_le_1", max(0.0, km.kappa - 1.0), 1e-10)
        report.check("kappa_mu.lambda_identity", abs(km.kappa - (1.0 - split.lam**2)), tol.default)
        report.check(
            "kmu_curvature.cross_check",
            float(np.abs(ct.kmu_curvature_eval(km, s, h) - R).max()),
            tol.curvature,
        )
        report.check(
            "eta_parallel", ct.eta_parallel_residual(state["conn"], s, h, state["d"]), tol.default
        )
        if report.boeckx_closed_form is not None:
            report.check("boeckx.closed_form", abs(km.boeckx - report.boeckx_closed_form), tol.boeckx)

    def deformation():
        s, d, h, km = state["s"], state["d"], state["h"], state["km"]
        worst_inv = worst_fit = worst_h = worst_contact = 0.0
        for a in D_HOMOTHETIC_FACTORS:
            km_bar = ct.d_homothetic(km, a)
            worst_inv = max(worst_inv, abs(km_bar.boeckx - km.boeckx))
            s_bar = ct.d_homothetic_structure(s, a)
            worst_contact = max(worst_contact, *ct.verify_contact_metric(s_bar, d).values())
            h_bar = ct.compute_h(s_bar, d)
            worst_h = max(worst_h, float(np.abs(h_bar - h / a).max()))
            R_bar = hs.levi_civita_curvature(hs.levi_civita_connection(d, s_bar.g), d)
            fit = ct.fit_kappa_mu(R_bar, s_bar, h_bar)
            worst_fit = max(worst_fit, abs(fit.kappa - km_bar.kappa), abs(fit.mu - km_bar.mu), fit.fit_residual)
        report.check("d_homothetic.invariance", worst_inv, tol.deformation)
        report.check("d_homothetic.contact", worst_contact, tol.deformation)
        report.check("d_homothetic.h_scaling", worst_h, tol.default)
        report.check("d_homothetic.refit", worst_fit, tol.curvature)

    def base_space():
        s, d, h, km, split = state["s"], state["d"], state["h"], state["km"], state["split"]
        b = d.b_m
        g_b = s.g[np.ix_(b, b)]
        R_bar = hs.symmetric_base_curvature(d)
        lts = tr.TripleSystem(-R_bar, "LTS")
        state["lts"] = lts
        for k, v in tr.lts_residuals(lts, seed=seed).items():
            report.check(f"base_lts.{k}", v, tol.default)
        report.check(
            "base_curvature.cross_check",
            float(np.abs(tr.base_curvature_formula(km, s, h, b) - R_bar).max()),
            tol.default,
        )

        kind, a, J = tr.standard_structure_solve(km, s, split, b)
        inv = tr.invariance_residuals(lts, J)
        low = tr.invariance_residuals(lts, tr.standard_operator(kind, 0.9 * a, s, split, b))["invariant"]
        high = tr.invariance_residuals(lts, tr.standard_operator(kind, 1.1 * a, s, split, b))["invariant"]
        report.check("standard.square", J.square_residual(), tol.default)
        report.check("standard.invariant", inv["invariant"], tol.default)
        report.check("standard.twisted", inv["twisted"], tol.default)
        report.check("standard.uniqueness_low", low, tol.uniqueness, mode="min")
        report.check("standard.uniqueness_high", high, tol.uniqueness, mode="min")
        model_J = state["bundle"].base_structure.matrix
        report.check(
            "standard.matches_model",
            min(float(np.abs(J.matrix - model_J).max()), float(np.abs(J.matrix + model_J).max())),
            tol.default,
        )
        report.check(
            "model_structure.invariant",
            tr.invariance_residuals(lts, state["bundle"].base_structure)["invariant"],
            tol.default,
        )
        report.standard_structure = {
            "kind": kind,
            "a": a,
            "invariance_residual": inv["invariant"],
            "twisted_residual": inv["twisted"],
            "residual_at_0.9a": low,
            "residual_at_1.1a": high,
        }

        tau = tr.tau_and_fixed_subsystem(lts, h[np.ix_(b, b)], split.lam, g_b, J)
        I = km.boeckx
        report.check("tau.square", tau.tau_squared, tol.default)
        report.check("tau.automorphism", tau.automorphism, tol.default)
        report.check("tau.anticommutation", tau.anticommutation, tol.default)
        report.check("tau.sphere_fit", tau.sphere_residual, tol.default)
        sphere = tr.sphere_lts(tau.fixed.dim).product
        report.check(
            "tau.restricted_bracket",
            float(np.abs(tau.fixed.product - 2.0 * split.lam * (I + 1.0) * sphere).max()),
            tol.default,
        )

        T_plus = tr.jordan_extension(lts, J, tau.fixed_basis, g_b)
        lam, mu = split.lam, km.mu
        scalar = (mu - 2.0 - 2.0 * lam) / 2.0 if kind == "complex" else -(2.0 - mu + 2.0 * lam) / 2.0
        # scalar * (g(Y,Z)X - g(X,Z)Y + g(X,Y)Z) = -scalar * sphere JTS
        closed = -scalar * tr.sphere_jts(T_plus.dim).product
        report.check("jordan.closed_form", float(np.abs(T_plus.product - closed).max()), tol.default)
        report.check("jordan.axioms", tr.axiom_residual(T_plus, seed=seed), tol.default)
        report.check(
            "jordan.extension",
            float(np.abs(tr.jordan_curvature(T_plus) + tau.fixed.product).max()),
            tol.default,
        )

        label = tr.classify_base(I, spec.n)
        report.base = label.as_dict()
        report.check("base.family_match", 0.0 if label.key == spec.family.base_key else 1.0, 0.5)

    def isotropy():
        report.check("ad_invariance", ad_invariance_residual(state["bundle"], samples, seed), tol.default)

    if not stage("structural", structural):
        return report
    h_ok = stage("h", operator_h)
    stage("isotropy", isotropy)
    if not (h_ok and stage("levi_civita", riemannian) and stage("kappa_mu", kappa_mu)):
        return report
    if state["km"].sasakian:
        return report
    stage("d_homothetic", deformation)
    stage("base_space", base_space)
    return report
