"""Alternating Convex-NMF driver: solve the G-QUBO, then the W-QUBO, and repeat."""

import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .builders import (BuilderConfig, BuildMode, build_g_qubo, build_w_qubo, g_layout,
                       subproblem_bit_count, w_layout)
from .encoding import EncodingScheme, decode_matrix, quantize_grid
from .errors import CapacityError, ConfigError, ShapeError
from .linalg import as_matrix, matmul, objective, penalty_g, penalty_w
from .solvers import (MAX_EXHAUSTIVE_VARS, SaSchedule, default_schedule, solve_exhaustive,
                      solve_sa)

SOLVERS = ("exhaustive", "sa")


@dataclass(frozen=True)
class FactorizationConfig:
    k: int
    scheme: EncodingScheme = field(default_factory=EncodingScheme)
    penalty_weight: float = 1.0
    mode: BuildMode = BuildMode.EXACT
    solver: str = "sa"
    schedule: SaSchedule | None = None  # None: derive from each model
    iterations: int = 1
    seed: int = 0
    sweeps: int | None = None  # override for derived schedules
    restarts: int | None = None

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.iterations < 1:
            raise ConfigError(f"iterations must be >= 1, got {self.iterations}")
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        object.__setattr__(self, "mode", BuildMode(self.mode))

    @property
    def builder(self):
        return BuilderConfig(self.k, self.scheme, self.penalty_weight, self.mode)

    def to_dict(self):
        sched = None
        if self.schedule is not None:
            s = self.schedule
            sched = dict(t_initial=s.t_initial, t_final=s.t_final, sweeps=s.sweeps,
                         restarts=s.restarts)
        return dict(k=self.k, alpha=self.scheme.alpha, b_max=self.scheme.b_max,
                    penalty_weight=self.penalty_weight, mode=self.mode.value,
                    solver=self.solver, schedule=sched, iterations=self.iterations,
                    seed=self.seed, sweeps=self.sweeps, restarts=self.restarts)

    def schedule_for(self, model):
        if self.schedule is not None:
            return self.schedule
        s = default_schedule(model)
        return replace(s, sweeps=self.sweeps or s.sweeps, restarts=self.restarts or s.restarts)


@dataclass
class FactorizationResult:
    w: np.ndarray
    g: np.ndarray
    objective_trace: list
    labels: np.ndarray
    centroids: np.ndarray
    timings: dict
    g_solve: object = None
    w_solve: object = None

    @property
    def objective(self):
        return self.objective_trace[-1][1]

    def sum_deviations(self):
        """Largest distance of a G row sum / W column sum from 1."""
        return dict(g_row_sum=float(np.max(np.abs(self.g.sum(axis=1) - 1.0))),
                    w_col_sum=float(np.max(np.abs(self.w.sum(axis=0) - 1.0))))


def init_w(n, k, scheme, seed):
    """Random column-stochastic W snapped to the encoding grid."""
    raw = np.random.default_rng(seed).random((n, k))
    raw /= raw.sum(axis=0, keepdims=True)
    w = quantize_grid(scheme, raw)
    for col in np.flatnonzero(~w.any(axis=0)):
        w[np.argmax(raw[:, col]), col] = scheme.alpha
    return w


def assign_clusters(g):
    """Cluster of each column: ``argmax_k g[k, n]``, lowest k on ties."""
    return np.argmax(as_matrix(g, "g"), axis=0)


def centroids(x, w):
    return matmul(x, w)


def permutation_accuracy(labels, truth):
    """Fraction of agreeing labels under the best one-to-one relabelling."""
    labels = np.asarray(labels)
    truth = np.asarray(truth)
    if labels.shape != truth.shape:
        raise ShapeError("label vectors differ in length")
    if labels.size == 0:
        return 1.0
    a = np.unique(labels, return_inverse=True)[1]
    b = np.unique(truth, return_inverse=True)[1]
    counts = np.zeros((a.max() + 1, b.max() + 1))
    np.add.at(counts, (a, b), 1)
    r, c = linear_sum_assignment(-counts)
    return float(counts[r, c].sum() / labels.size)


def half_step_seed(seed, iteration, half):
    return int(np.random.SeedSequence([int(seed), iteration, half]).generate_state(1)[0])


def _solve(model, cfg, seed):
    if cfg.solver == "exhaustive":
        return solve_exhaustive(model)
    return solve_sa(model, cfg.schedule_for(model), seed)


def check_capacity(n, cfg):
    if cfg.solver == "exhaustive":
        bits = subproblem_bit_count(cfg.k, n, cfg.scheme)
        if bits > MAX_EXHAUSTIVE_VARS:
            raise CapacityError(f"subproblems need {bits} bits; exhaustive solver is capped at "
                                f"{MAX_EXHAUSTIVE_VARS}")


def run(x, cfg, on_qubo=None):
    """Factorize ``X`` (dims x points) with ``cfg.iterations`` G/W alternations.

    ``on_qubo(label, model)`` is called with each freshly built QUBO, labels
    being ``"g0", "w0", "g1", ...``.
    """
    x = as_matrix(x, "x")
    n = x.shape[1]
    if cfg.k > n:
        raise ConfigError(f"k={cfg.k} exceeds the number of data columns ({n})")
    check_capacity(n, cfg)
    bcfg = cfg.builder
    timings = dict(build_g=0.0, solve_g=0.0, build_w=0.0, solve_w=0.0)
    t_start = time.perf_counter()
    w = init_w(n, cfg.k, cfg.scheme, cfg.seed)
    trace = []
    g = g_res = w_res = None
    for it in range(cfg.iterations):
        t0 = time.perf_counter()
        model = build_g_qubo(x, w, bcfg)
        t1 = time.perf_counter()
        g_res = _solve(model, cfg, half_step_seed(cfg.seed, it, 0))
        g = decode_matrix(g_layout(n, bcfg), g_res.assignment)
        t2 = time.perf_counter()
        timings["build_g"] += t1 - t0
        timings["solve_g"] += t2 - t1
        trace.append((f"g{it}", objective(x, w, g), penalty_g(g), penalty_w(w)))
        if on_qubo is not None:
            on_qubo(f"g{it}", model)

        t0 = time.perf_counter()
        model = build_w_qubo(x, g, bcfg)
        t1 = time.perf_counter()
        w_res = _solve(model, cfg, half_step_seed(cfg.seed, it, 1))
        w = decode_matrix(w_layout(n, bcfg), w_res.assignment)
        t2 = time.perf_counter()
        timings["build_w"] += t1 - t0
        timings["solve_w"] += t2 - t1
        trace.append((f"w{it}", objective(x, w, g), penalty_g(g), penalty_w(w)))
        if on_qubo is not None:
            on_qubo(f"w{it}", model)
    timings["total"] = time.perf_counter() - t_start
    return FactorizationResult(w=w, g=g, objective_trace=trace, labels=assign_clusters(g),
                               centroids=centroids(x, w), timings=timings,
                               g_solve=g_res, w_solve=w_res)
