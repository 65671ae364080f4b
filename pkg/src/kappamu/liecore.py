"""Dense matrix Lie algebras: brackets, so(p, q) bases, structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from kappamu.exceptions import NotASubalgebraError, NotInSpanError

DEFAULT_TOL = 1e-9


def bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix commutator ``AB - BA``."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return A @ B - B @ A


def quadratic_form(signature: tuple[int, int]) -> np.ndarray:
    """Diagonal form with the ``q`` negative signs placed first.

    ``(4, 0)`` is the identity, ``(2, 2)`` is ``diag(-1, -1, 1, 1)`` and
    ``(3, 1)`` is ``diag(-1, 1, 1, 1)``.
    """
    p, q = signature
    return np.diag([-1.0] * q + [1.0] * p)


def orthogonality_residual(X: np.ndarray, S: np.ndarray) -> float:
    """Max-entry residual of ``X^T S + S X``."""
    return float(np.abs(X.T @ S + S @ X).max())


@dataclass(frozen=True)
class OrderedBasis:
    """An ordered, linearly independent list of square matrices."""

    elements: np.ndarray
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        elements = np.asarray(self.elements, dtype=float)
        if elements.ndim == 2:
            elements = elements[None]
        if elements.ndim != 3 or elements.shape[1] != elements.shape[2]:
            raise ValueError("basis elements must be square matrices of one size")
        object.__setattr__(self, "elements", elements)
        labels = tuple(self.labels) or tuple(f"E{i}" for i in range(len(elements)))
        if len(labels) != len(elements):
            raise ValueError("one label per basis element is required")
        object.__setattr__(self, "labels", labels)
        if len(elements) and np.linalg.matrix_rank(self._flat) < len(elements):
            raise ValueError("basis elements are linearly dependent")

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def dim(self) -> int:
        """Size of the matrices (not the number of elements)."""
        return self.elements.shape[1]

    @property
    def _flat(self) -> np.ndarray:
        return self.elements.reshape(len(self.elements), -1).T

    @cached_property
    def gram(self) -> np.ndarray:
        F = self._flat
        return F.T @ F

    @cached_property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.gram)) if len(self) else 1.0

    @cached_property
    def _pinv(self) -> np.ndarray:
        return np.linalg.pinv(self._flat)

    def combine(self, coeffs: np.ndarray) -> np.ndarray:
        """The matrix ``sum_i coeffs[i] * E_i``."""
        return np.tensordot(np.asarray(coeffs, dtype=float), self.elements, axes=1)

    def concat(self, *others: "OrderedBasis") -> "OrderedBasis":
        parts = (self,) + others
        return OrderedBasis(
            np.concatenate([b.elements for b in parts]),
            sum((b.labels for b in parts), ()),
        )


def so_basis(signature: tuple[int, int]) -> OrderedBasis:
    """Basis of ``{X : X^T S + S X = 0}`` for the form of :func:`quadratic_form`.

    One element per index pair ``i < j`` in lexicographic order, with
    ``X[j, i] = 1`` and ``X[i, j] = -s_i s_j``: antisymmetric where the signs
    of ``S`` agree, symmetric where they differ.
    """
    p, q = signature
    if p < 0 or q < 0 or p + q < 2:
        raise ValueError(f"signature {signature!r} needs p, q >= 0 and p + q >= 2")
    S = np.diag(quadratic_form(signature))
    N = p + q
    elements, labels = [], []
    for i in range(N):
        for j in range(i + 1, N):
            X = np.zeros((N, N))
            X[j, i] = 1.0
            X[i, j] = -S[i] * S[j]
            elements.append(X)
            labels.append(f"e{i}^e{j}")
    return OrderedBasis(np.array(elements), tuple(labels))


def coordinates(X: np.ndarray, basis: OrderedBasis, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Least-squares coefficients of ``X`` in ``basis``; raises if ``X`` is outside the span."""
    X = np.asarray(X, dtype=float)
    if X.shape != (basis.dim, basis.dim):
        raise ValueError(f"matrix of shape {X.shape} does not match basis dim {basis.dim}")
    c = basis._pinv @ X.ravel()
    residual = float(np.abs(basis.combine(c) - X).max()) if len(basis) else float(np.abs(X).max())
    if residual > tol:
        raise NotInSpanError(f"not in span (residual {residual:.3e})")
    return c


def structure_constants(basis: OrderedBasis, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Table ``c[i, j, k]`` with ``[E_i, E_j] = sum_k c[i, j, k] E_k``."""
    E = basis.elements
    k = len(basis)
    # all brackets at once: (k, k, N, N)
    prods = np.einsum("iab,jbc->ijac", E, E)
    brackets = prods - prods.transpose(1, 0, 2, 3)
    flat = brackets.reshape(k * k, -1)
    c = flat @ basis._pinv.T
    residual = float(np.abs(c @ basis._flat.T - flat).max()) if k else 0.0
    if residual > tol:
        raise NotASubalgebraError(f"not a subalgebra (bracket residual {residual:.3e})")
    c = c.reshape(k, k, k)
    # exact antisymmetry
    return 0.5 * (c - c.transpose(1, 0, 2))


def jacobi_residual(c: np.ndarray) -> float:
    """Max violation of the Jacobi identity over all index quadruples."""
    c = np.asarray(c, dtype=float)
    if c.size == 0:
        return 0.0
    t = np.einsum("ijm,mkl->ijkl", c, c)
    cyc = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.abs(cyc).max())


def from_labels(elements: Sequence[np.ndarray], labels: Sequence[str]) -> OrderedBasis:
    return OrderedBasis(np.array(elements, dtype=float), tuple(labels))
