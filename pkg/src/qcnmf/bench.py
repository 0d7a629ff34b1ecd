"""Runtime comparison of the annealing path against the classical baseline."""

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .baseline import BaselineConfig, solve_classical
from .data import make_blobs
from .driver import FactorizationConfig, run
from .errors import CapacityError

COLUMNS = ("size", "repeat", "path", "build_g_ms", "solve_g_ms", "build_w_ms", "solve_w_ms",
           "total_ms", "objective")
DEFAULT_SIZES = (4, 6, 8, 10, 12, 14, 16, 18, 20, 24, 28, 32)
BENCH_SPREAD = 0.05


@dataclass
class RunRecord:
    size: int
    repeat: int
    path: str
    build_g_ms: float
    solve_g_ms: float
    build_w_ms: float
    solve_w_ms: float
    total_ms: float
    objective: float

    @classmethod
    def from_result(cls, size, repeat, path, result):
        t = {k: v * 1e3 for k, v in result.timings.items()}
        return cls(size, repeat, path, t["build_g"], t["solve_g"], t["build_w"], t["solve_w"],
                   t["total"], result.objective)

    def row(self):
        return [self.size, self.repeat, self.path, f"{self.build_g_ms:.4f}",
                f"{self.solve_g_ms:.4f}", f"{self.build_w_ms:.4f}", f"{self.solve_w_ms:.4f}",
                f"{self.total_ms:.4f}", repr(self.objective)]


def instance_seed(seed, size, repeat):
    return int(np.random.SeedSequence([int(seed), int(size), int(repeat)]).generate_state(1)[0])


def bench_instance(size, dims, k, seed, repeat):
    data, _ = make_blobs(size, dims, k, BENCH_SPREAD, instance_seed(seed, size, repeat))
    return data.T


def run_bench(sizes=DEFAULT_SIZES, dims=2, k=2, repeats=1, seed=0, sweeps=None, restarts=None,
              max_iters=500, max_reals=65):
    """One quantum-sim and one classical record per ``(size, repeat)``, in key order."""
    for size in sizes:
        if size * dims > max_reals:
            raise CapacityError(f"size {size} x {dims} dims exceeds {max_reals} reals")
        if size < k:
            raise CapacityError(f"size {size} is smaller than k={k}")
    kernels.warmup()
    records = []
    for size in sizes:
        for rep in range(repeats):
            x = bench_instance(size, dims, k, seed, rep)
            run_seed = instance_seed(seed, size, rep)
            qcfg = FactorizationConfig(k, seed=run_seed, sweeps=sweeps, restarts=restarts)
            records.append(RunRecord.from_result(size, rep, "quantum-sim", run(x, qcfg)))
            ccfg = BaselineConfig(k, max_iters=max_iters, seed=run_seed)
            records.append(RunRecord.from_result(size, rep, "classical", solve_classical(x, ccfg)))
    return records


def write_bench_csv(path, records):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for rec in records:
            writer.writerow(rec.row())
