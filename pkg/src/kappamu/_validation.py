"""Input checks shared by the public functions and estimators."""

from __future__ import annotations

import numbers

import numpy as np


def check_square(A, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def check_metric(g, name: str = "metric") -> np.ndarray:
    """Symmetric positive definite Gram matrix."""
    g = check_square(g, name)
    if np.abs(g - g.T).max() > 1e-12 * max(1.0, np.abs(g).max()):
        raise ValueError(f"{name} is not symmetric")
    if np.linalg.eigvalsh(g).min() <= 0:
        raise ValueError(f"{name} is singular or not positive definite")
    return g


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a finite positive number, got {value}")
    return value


def check_int(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_vectors(X, dim: int, name: str = "X") -> np.ndarray:
    """2-d array of row vectors with ``dim`` columns (a single vector is promoted)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != dim:
        raise ValueError(f"{name} must have shape (n_samples, {dim}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    return X
