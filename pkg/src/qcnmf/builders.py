"""QUBO builders for the two alternating half-steps.

With ``W`` fixed the penalized G-subproblem is

    ||X - XWG||^2 + lam * sum_k (1 - sum_n g_kn)^2
        = Tr(D) + lam*K - 2 sum (A_nk + lam) g_kn
          + sum_n sum_kk' B_kk' g_kn g_k'n + lam * sum_k sum_nn' g_kn g_kn'

with ``D = X^T X``, ``A = D W`` and ``B = W^T D W``. With ``G`` fixed,

    ||X - XWG||^2 + lam * sum_k (1 - sum_n w_nk)^2
        = Tr(D) + lam*K - 2 sum (C_kn + lam) w_nk
          + sum D_nn' E_k'k w_nk w_n'k' + lam * sum_k sum_nn' w_nk w_n'k

with ``C = G D`` and ``E = G G^T``. Both are quadratic forms in the factor
entries; substituting the fixed-point encoding ``v = sum_b beta_b q_b`` gives the
bit-level QUBO.

``BuildMode.EXACT`` assembles the full quadratic form. ``BuildMode.PAPER``
transcribes the closed-form coefficient lists term by term; for the W-subproblem
that list keeps only the ``n' != n and k' != k`` cross terms plus the diagonal,
so its energies differ from the true objective.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .encoding import BitLayout, EncodingScheme
from .errors import ConfigError, DomainError, ShapeError
from .linalg import as_matrix, gram
from .qubo import QuboModel


class BuildMode(str, Enum):
    EXACT = "exact"
    PAPER = "paper"


@dataclass(frozen=True)
class BuilderConfig:
    k: int
    scheme: EncodingScheme = field(default_factory=EncodingScheme)
    penalty_weight: float = 1.0
    mode: BuildMode = BuildMode.EXACT

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not self.penalty_weight >= 0:
            raise ConfigError(f"penalty_weight must be >= 0, got {self.penalty_weight}")
        object.__setattr__(self, "mode", BuildMode(self.mode))


def subproblem_bit_count(rows, cols, scheme):
    return rows * cols * scheme.bits


def g_layout(n, cfg):
    return BitLayout(cfg.k, n, cfg.scheme)


def w_layout(n, cfg):
    return BitLayout(n, cfg.k, cfg.scheme)


def _check_fixed_factor(f, shape, name):
    if f.shape != shape:
        raise ShapeError(f"{name} must have shape {shape}, got {f.shape}")
    if np.any(f < 0):
        raise DomainError(f"{name} has negative entries")


def g_blocks(x, w, cfg):
    """Gram blocks ``(D, A, B)`` of the G-subproblem."""
    x = as_matrix(x, "x")
    w = as_matrix(w, "w")
    _check_fixed_factor(w, (x.shape[1], cfg.k), "W")
    d = gram(x)
    a = d @ w
    b = w.T @ d @ w
    return d, a, 0.5 * (b + b.T)


def w_blocks(x, g, cfg):
    """Gram blocks ``(C, D, E)`` of the W-subproblem."""
    x = as_matrix(x, "x")
    g = as_matrix(g, "g")
    _check_fixed_factor(g, (cfg.k, x.shape[1]), "G")
    d = gram(x)
    c = g @ d
    e = g @ g.T
    return c, d, 0.5 * (e + e.T)


def _expand_bits(hessian, gradient, offset, scheme):
    """Bit-level QUBO of ``offset + gradient @ v + v @ hessian @ v`` with encoded ``v``."""
    beta = scheme.weights()
    quad = np.kron(hessian, np.outer(beta, beta))
    lin = np.kron(gradient, beta)
    return QuboModel.from_dense(quad, lin, offset).finalize()


def build_g_qubo(x, w, cfg):
    d, a, b = g_blocks(x, w, cfg)
    n = d.shape[0]
    lam = cfg.penalty_weight
    offset = float(np.trace(d)) + lam * cfg.k
    if cfg.mode is BuildMode.PAPER:
        return _paper_g(a, b, n, lam, offset, cfg)
    # entry (k, n) sits at k*N + n
    hessian = np.kron(b, np.eye(n)) + lam * np.kron(np.eye(cfg.k), np.ones((n, n)))
    gradient = -2.0 * (a.T + lam).ravel()
    return _expand_bits(hessian, gradient, offset, cfg.scheme)


def build_w_qubo(x, g, cfg):
    c, d, e = w_blocks(x, g, cfg)
    n = d.shape[0]
    lam = cfg.penalty_weight
    offset = float(np.trace(d)) + lam * cfg.k
    if cfg.mode is BuildMode.PAPER:
        return _paper_w(c, d, e, n, lam, offset, cfg)
    # entry (n, k) sits at n*K + k
    hessian = np.kron(d, e) + lam * np.kron(np.ones((n, n)), np.eye(cfg.k))
    gradient = -2.0 * (c.T + lam).ravel()
    return _expand_bits(hessian, gradient, offset, cfg.scheme)


def _register_terms(model, reg, beta, lin_coef, self_coef):
    """Linear terms and within-register pairs of one encoded entry."""
    for i, bi in enumerate(beta):
        model.add_linear(reg.start + i, lin_coef * bi + self_coef * bi * bi)
        for j in range(i + 1, len(beta)):
            model.add_quadratic(reg.start + i, reg.start + j, 2.0 * self_coef * bi * beta[j])


def _cross_terms(model, reg1, reg2, beta, coef):
    if coef == 0.0:
        return
    if reg1.start > reg2.start:
        reg1, reg2 = reg2, reg1
    model.add_quadratic_block(np.arange(reg1.start, reg1.stop), np.arange(reg2.start, reg2.stop),
                              2.0 * coef * np.outer(beta, beta))


def _paper_g(a, b, n, lam, offset, cfg):
    layout = g_layout(n, cfg)
    beta = cfg.scheme.weights()
    model = QuboModel(layout.total_bits, offset)
    kk = cfg.k
    for k in range(kk):
        for i in range(n):
            _register_terms(model, layout.register(k, i), beta,
                            -2.0 * (a[i, k] + lam), b[k, k] + lam)
    for k in range(kk):
        for i in range(n):
            reg = layout.register(k, i)
            for k2 in range(k + 1, kk):
                _cross_terms(model, reg, layout.register(k2, i), beta, b[k, k2])
            for i2 in range(i + 1, n):
                _cross_terms(model, reg, layout.register(k, i2), beta, lam)
    return model.finalize()


def _paper_w(c, d, e, n, lam, offset, cfg):
    layout = w_layout(n, cfg)
    beta = cfg.scheme.weights()
    model = QuboModel(layout.total_bits, offset)
    kk = cfg.k
    for i in range(n):
        for k in range(kk):
            _register_terms(model, layout.register(i, k), beta,
                            -2.0 * (c[k, i] + lam), d[i, i] * e[k, k] + lam)
    for i in range(n):
        for k in range(kk):
            reg = layout.register(i, k)
            for i2 in range(i + 1, n):
                for k2 in range(kk):
                    if k2 != k:
                        _cross_terms(model, reg, layout.register(i2, k2), beta, d[i, i2] * e[k2, k])
                # penalty couples equal k across different n
                _cross_terms(model, reg, layout.register(i2, k), beta, lam)
    return model.finalize()
