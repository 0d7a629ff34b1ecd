"""Dense matrix helpers and the exact objective/penalty evaluators.

Matrices are plain 2-D ``float64`` numpy arrays. Every function returns a new
array and never mutates its inputs.
"""

import numpy as np

from .errors import DomainError, ShapeError


def as_matrix(a, name="matrix"):
    """Coerce ``a`` to a finite 2-D float64 array (a copy)."""
    m = np.array(a, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"{name} contains NaN or infinite entries")
    return m


def matmul(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def gram(x):
    """Return ``x.T @ x``, symmetrized to remove rounding asymmetry."""
    x = as_matrix(x, "x")
    g = x.T @ x
    return 0.5 * (g + g.T)


def frobenius_sq(x):
    x = as_matrix(x, "x")
    return float(np.sum(x * x))


def _check_factor_shapes(x, w, g):
    m, n = x.shape
    if w.shape[0] != n:
        raise ShapeError(f"W must have {n} rows, got shape {w.shape}")
    if g.shape != (w.shape[1], n):
        raise ShapeError(f"G must have shape {(w.shape[1], n)}, got {g.shape}")


def objective(x, w, g):
    """Squared Frobenius residual ``||X - XWG||_F^2`` evaluated directly."""
    x = as_matrix(x, "x")
    w = as_matrix(w, "w")
    g = as_matrix(g, "g")
    _check_factor_shapes(x, w, g)
    r = x - x @ w @ g
    return float(np.sum(r * r))


def penalty_g(g):
    """Row-sum constraint violation ``sum_k (1 - sum_n g_kn)^2``."""
    g = as_matrix(g, "g")
    return float(np.sum((1.0 - g.sum(axis=1)) ** 2))


def penalty_w(w):
    """Column-sum constraint violation ``sum_k (1 - sum_n w_nk)^2``."""
    w = as_matrix(w, "w")
    return float(np.sum((1.0 - w.sum(axis=0)) ** 2))
