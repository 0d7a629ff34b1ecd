"""Classical Convex-NMF by alternating projected gradient with Armijo backtracking.

Minimizes the same penalized objective as the QUBO path, starting from the same
:func:`~qcnmf.driver.init_w`, so timings compare solvers rather than models.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .driver import FactorizationResult, assign_clusters, centroids, init_w
from .encoding import EncodingScheme
from .errors import ConfigError
from .linalg import as_matrix, gram, objective, penalty_g, penalty_w

MAX_BACKTRACKS = 60
MAX_STEP = 1e8


@dataclass(frozen=True)
class BaselineConfig:
    k: int
    max_iters: int = 500
    penalty_weight: float = 1.0
    step_shrink: float = 0.5
    armijo_c: float = 1e-4
    tol: float = 1e-7
    seed: int = 0
    scheme: EncodingScheme = field(default_factory=EncodingScheme)

    def __post_init__(self):
        if self.k < 1 or self.max_iters < 1:
            raise ConfigError("k and max_iters must be >= 1")
        if not 0 < self.step_shrink < 1 or not 0 < self.armijo_c < 1:
            raise ConfigError("step_shrink and armijo_c must lie in (0, 1)")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.penalty_weight < 0:
            raise ConfigError("penalty_weight must be >= 0")


def g_half_objective(x, w, g, lam):
    return objective(x, w, g) + lam * penalty_g(g)


def w_half_objective(x, w, g, lam):
    return objective(x, w, g) + lam * penalty_w(w)


def grad_g(d, w, g, lam):
    """Gradient in G of ``||X - XWG||^2 + lam * penalty_g(G)``, with ``d = X^T X``."""
    wd = w.T @ d
    return 2.0 * (wd @ w @ g - wd) - 2.0 * lam * (1.0 - g.sum(axis=1))[:, None]


def grad_w(d, w, g, lam):
    """Gradient in W of ``||X - XWG||^2 + lam * penalty_w(W)``, with ``d = X^T X``."""
    return (2.0 * (d @ w @ (g @ g.T) - d @ g.T)
            - 2.0 * lam * (1.0 - w.sum(axis=0))[None, :])


def armijo_step(f, grad, z, fz, step, shrink, c):
    """One projected-gradient step onto ``z >= 0``.

    Returns ``(z_new, f_new, step_used)``; if no trial satisfies the sufficient
    decrease test the point is returned unchanged with ``step_used = 0``.
    """
    for _ in range(MAX_BACKTRACKS):
        trial = np.maximum(z - step * grad, 0.0)
        ft = f(trial)
        if ft <= fz + c * np.sum(grad * (trial - z)):
            return trial, ft, step
        step *= shrink
    return z, fz, 0.0


def minimize_g(x, w, g0, lam, iters=2000, shrink=0.5, c=1e-4, tol=1e-12):
    """Projected gradient on the G half-step alone; returns ``(g, value)``."""
    x = as_matrix(x, "x")
    d = gram(x)
    g = as_matrix(g0, "g0")
    f = lambda z: g_half_objective(x, w, z, lam)
    fg, step = f(g), 1.0
    for _ in range(iters):
        g, fn, used = armijo_step(f, grad_g(d, w, g, lam), g, fg, step, shrink, c)
        done = used == 0.0 or fg - fn <= tol * max(1.0, abs(fg))
        fg = fn
        step = min((used or step) / shrink, MAX_STEP)
        if done:
            break
    return g, fg


def minimize_w(x, w0, g, lam, iters=2000, shrink=0.5, c=1e-4, tol=1e-12):
    """Projected gradient on the W half-step alone; returns ``(w, value)``."""
    x = as_matrix(x, "x")
    d = gram(x)
    w = as_matrix(w0, "w0")
    f = lambda z: w_half_objective(x, z, g, lam)
    fw, step = f(w), 1.0
    for _ in range(iters):
        w, fn, used = armijo_step(f, grad_w(d, w, g, lam), w, fw, step, shrink, c)
        done = used == 0.0 or fw - fn <= tol * max(1.0, abs(fw))
        fw = fn
        step = min((used or step) / shrink, MAX_STEP)
        if done:
            break
    return w, fw


def solve_classical(x, cfg, history=None):
    """Alternate one Armijo step on G and one on W until the relative decrease is below tol.

    If ``history`` is a list, ``(factor, value_before, value_after)`` of every
    accepted step is appended to it.
    """
    x = as_matrix(x, "x")
    n = x.shape[1]
    if cfg.k > n:
        raise ConfigError(f"k={cfg.k} exceeds the number of data columns ({n})")
    lam = cfg.penalty_weight
    t_start = time.perf_counter()
    d = gram(x)
    w = init_w(n, cfg.k, cfg.scheme, cfg.seed)
    g = np.full((cfg.k, n), 1.0 / n)
    step_g = step_w = 1.0
    timings = dict(build_g=0.0, solve_g=0.0, build_w=0.0, solve_w=0.0)
    trace = []
    total = objective(x, w, g) + lam * (penalty_g(g) + penalty_w(w))
    for it in range(cfg.max_iters):
        t0 = time.perf_counter()
        fg = lambda z: g_half_objective(x, w, z, lam)
        before = fg(g)
        g, after, used = armijo_step(fg, grad_g(d, w, g, lam), g, before, step_g,
                                     cfg.step_shrink, cfg.armijo_c)
        step_g = min((used or step_g) / cfg.step_shrink, MAX_STEP)
        if history is not None and used:
            history.append(("g", before, after))
        t1 = time.perf_counter()
        trace.append((f"g{it}", objective(x, w, g), penalty_g(g), penalty_w(w)))

        fw = lambda z: w_half_objective(x, z, g, lam)
        before = fw(w)
        w, after, used = armijo_step(fw, grad_w(d, w, g, lam), w, before, step_w,
                                     cfg.step_shrink, cfg.armijo_c)
        step_w = min((used or step_w) / cfg.step_shrink, MAX_STEP)
        if history is not None and used:
            history.append(("w", before, after))
        t2 = time.perf_counter()
        trace.append((f"w{it}", objective(x, w, g), penalty_g(g), penalty_w(w)))
        timings["solve_g"] += t1 - t0
        timings["solve_w"] += t2 - t1

        new_total = objective(x, w, g) + lam * (penalty_g(g) + penalty_w(w))
        if abs(total - new_total) < cfg.tol * max(abs(total), 1e-300):
            total = new_total
            break
        total = new_total
    timings["total"] = time.perf_counter() - t_start
    return FactorizationResult(w=w, g=g, objective_trace=trace, labels=assign_clusters(g),
                               centroids=centroids(x, w), timings=timings)
