"""scikit-learn style wrapper around :func:`kappamu.models.verify_model`."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from kappamu._validation import check_vectors
from kappamu.exceptions import KappaMuError
from kappamu.models import ModelSpec, Tolerances, build_model, verify_model
from kappamu import homspace as hs


class KappaMuSpace(TransformerMixin, BaseEstimator):
    """Verified homogeneous (kappa, mu)-space model.

    ``fit`` builds the model and runs the full verification; ``transform``
    applies the Jacobi operator ``X -> R(X, xi) xi`` to rows of m-coordinates.

    Parameters
    ----------
    family : str
        ``"so_n_plus_2"``, ``"so_n_2"`` or ``"so_n_plus_1_1"`` (aliases ``1``, ``2``, ``3`` accepted).
    n : int
        Dimension parameter, ``n >= 1``; the model has dimension ``2n + 1``.
    alpha : float
        Positive deformation parameter.
    tol : float
        Default residual tolerance.
    seed, samples : int
        Seed and count of random isotropy elements for the invariance probe.
    """

    def __init__(self, family="so_n_plus_2", n=2, alpha=0.5, tol=1e-9, seed=0, samples=10):
        self.family = family
        self.n = n
        self.alpha = alpha
        self.tol = tol
        self.seed = seed
        self.samples = samples

    def fit(self, X=None, y=None):
        spec = ModelSpec(self.family, self.n, self.alpha)
        report = verify_model(spec, Tolerances.with_default(self.tol), samples=self.samples, seed=self.seed)
        if report.errors:
            raise KappaMuError("; ".join(report.errors))
        bundle = build_model(spec)
        d = bundle.decomposition
        self.bundle_ = bundle
        self.report_ = report
        self.curvature_ = hs.levi_civita_curvature(hs.levi_civita_connection(d, bundle.contact.g), d)
        self.kappa_ = report.kappa
        self.mu_ = report.mu
        self.lambda_ = report.lam
        self.boeckx_ = report.boeckx
        self.n_features_in_ = d.dim_m
        return self

    def transform(self, X):
        check_is_fitted(self, "curvature_")
        X = check_vectors(X, self.n_features_in_)
        xi = self.bundle_.contact.xi
        return np.einsum("sx,xyzl,y,z->sl", X, self.curvature_, xi, xi)

    def score(self, X=None, y=None) -> float:
        """1.0 when every verification check passed, else 0.0."""
        check_is_fitted(self, "report_")
        return float(self.report_.passed)
