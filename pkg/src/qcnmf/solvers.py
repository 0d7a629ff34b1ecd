"""QUBO solvers: exhaustive enumeration and multi-restart simulated annealing."""

import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapacityError, ConfigError

MAX_EXHAUSTIVE_VARS = 24


@dataclass(frozen=True)
class SaSchedule:
    t_initial: float
    t_final: float
    sweeps: int = 1000
    restarts: int = 10

    def __post_init__(self):
        if not (self.t_initial >= self.t_final > 0):
            raise ConfigError(
                f"need t_initial >= t_final > 0, got {self.t_initial}, {self.t_final}")
        if self.sweeps < 1 or self.restarts < 1:
            raise ConfigError("sweeps and restarts must be >= 1")

    def temperatures(self):
        """Geometric cooling from ``t_initial`` to ``t_final`` over the sweeps."""
        if self.sweeps == 1:
            return np.array([float(self.t_initial)])
        return np.geomspace(self.t_initial, self.t_final, self.sweeps)


@dataclass
class SolveResult:
    assignment: np.ndarray
    energy: float
    evaluations: int
    restarts_used: int
    seed: int
    wall_time: float = field(default=0.0, compare=False)
    restart_energies: list = field(default_factory=list)
    best_trace: np.ndarray | None = field(default=None, repr=False)

    def same_outcome(self, other):
        """Equality ignoring wall time."""
        return (np.array_equal(self.assignment, other.assignment) and self.energy == other.energy
                and self.evaluations == other.evaluations
                and self.restarts_used == other.restarts_used and self.seed == other.seed)


def assignment_code(q):
    """Unsigned integer of ``q`` with bit ``i`` weighted ``2**i``."""
    return sum(1 << i for i, v in enumerate(np.asarray(q)) if v)


def code_to_assignment(code, n):
    return np.array([(code >> i) & 1 for i in range(n)], dtype=np.uint8)


def tie_tolerance(model):
    """Energies closer than this to the minimum count as ties."""
    scale = np.abs(model.linear).sum() + np.abs(model.upper).sum()
    return 1e-10 * (1.0 + float(scale))


def solve_exhaustive(model, use_numba=None):
    """Global minimum by enumeration; ties go to the smallest :func:`assignment_code`."""
    model.finalize()
    n = model.num_vars
    if n > MAX_EXHAUSTIVE_VARS:
        raise CapacityError(f"exhaustive search is capped at {MAX_EXHAUSTIVE_VARS} variables, "
                            f"model has {n}")
    t0 = time.perf_counter()
    code, _ = kernels.exhaustive_min(model.linear, model.coupling, tie_tolerance(model),
                                     use_numba=use_numba)
    q = code_to_assignment(code, n)
    return SolveResult(q, model.energy(q), 1 << n, 1, 0, time.perf_counter() - t0)


def default_schedule(model):
    """Temperatures from the coefficient magnitudes; 1000 sweeps, 10 restarts."""
    model.finalize()
    t_hi = model.max_abs_coefficient()
    if t_hi == 0.0:
        return SaSchedule(1e-9, 1e-9)
    t_lo = max(1e-3 * model.min_abs_nonzero_coefficient(), 1e-9)
    return SaSchedule(t_hi, min(t_lo, t_hi))


def restart_stream(seed, restart, n, sweeps):
    """Initial state and acceptance uniforms for one restart."""
    rng = np.random.default_rng([int(seed), int(restart)])
    q0 = rng.integers(0, 2, size=n, dtype=np.uint8)
    return q0, rng.random((sweeps, n))


def run_restarts(model, schedule, seed, restarts, use_numba=None):
    """Anneal the listed restart indices; returns ``[(index, energy, state, trace)]``."""
    n = model.num_vars
    streams = [restart_stream(seed, r, n, schedule.sweeps) for r in restarts]
    q0 = np.stack([s[0] for s in streams]) if streams else np.zeros((0, n), np.uint8)
    u = np.stack([s[1] for s in streams]) if streams else np.zeros((0, schedule.sweeps, n))
    best, _, trace = kernels.anneal(model.linear, model.coupling, q0, u,
                                    schedule.temperatures(), use_numba=use_numba)
    return [(r, model.energy(best[i]), best[i], trace[i] + model.offset)
            for i, r in enumerate(restarts)]


def reduce_restarts(outcomes):
    """Pick the lowest energy; ties go to the lowest restart index, then the lowest code."""
    return min(outcomes, key=lambda o: (o[1], o[0], assignment_code(o[2])))


def solve_sa(model, schedule=None, seed=0, use_numba=None):
    model.finalize()
    if model.num_vars < 1:
        raise ConfigError("annealing needs at least one variable")
    schedule = default_schedule(model) if schedule is None else schedule
    if not isinstance(schedule, SaSchedule):
        raise ConfigError(f"expected SaSchedule, got {type(schedule).__name__}")
    t0 = time.perf_counter()
    outcomes = run_restarts(model, schedule, seed, range(schedule.restarts), use_numba)
    idx, energy, q, _ = reduce_restarts(outcomes)
    return SolveResult(
        assignment=q.copy(), energy=energy,
        evaluations=schedule.restarts * schedule.sweeps * model.num_vars,
        restarts_used=schedule.restarts, seed=int(seed),
        wall_time=time.perf_counter() - t0,
        restart_energies=[o[1] for o in outcomes],
        best_trace=outcomes[idx][3],
    )
