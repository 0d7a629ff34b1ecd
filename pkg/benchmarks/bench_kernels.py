"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 8,16,32,64] [--repeats 3]

Both backends see identical inputs and must return identical results; the
run aborts if they do not.
"""

import argparse
import time

import numpy as np

from qcnmf import kernels
from qcnmf._accel import HAVE_NUMBA
from qcnmf.solvers import SaSchedule, default_schedule, restart_stream, tie_tolerance
from qcnmf.qubo import QuboModel


def random_model(rng, n):
    return QuboModel.from_dense(np.triu(rng.normal(size=(n, n)), 1), rng.normal(size=n)).finalize()


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_anneal(n, sweeps, restarts, repeats, rng):
    model = random_model(rng, n)
    sched = default_schedule(model)
    sched = SaSchedule(sched.t_initial, sched.t_final, sweeps, restarts)
    draws = [restart_stream(0, r, n, sweeps) for r in range(restarts)]
    q0 = np.stack([d[0] for d in draws])
    u = np.stack([d[1] for d in draws])
    temps = sched.temperatures()
    row = {}
    for name, flag in (("numba", True), ("numpy", False)):
        row[name] = best_of(lambda: kernels.anneal(model.linear, model.coupling, q0, u, temps,
                                                   use_numba=flag), repeats)
    a, b = row["numba"][1], row["numpy"][1]
    assert all(np.array_equal(x, y) for x, y in zip(a, b)), "backends disagree"
    return row["numba"][0], row["numpy"][0]


def bench_exhaustive(n, repeats, rng):
    model = random_model(rng, n)
    tol = tie_tolerance(model)
    t_nb, r_nb = best_of(lambda: kernels.exhaustive_min(model.linear, model.coupling, tol,
                                                        use_numba=True), repeats)
    t_np, r_np = best_of(lambda: kernels.exhaustive_min(model.linear, model.coupling, tol,
                                                        use_numba=False), repeats)
    assert r_nb[0] == r_np[0], "backends disagree"
    return t_nb, t_np


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="8,16,32,64")
    p.add_argument("--exhaustive-sizes", default="12,16,20")
    p.add_argument("--sweeps", type=int, default=1000)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is unavailable or disabled by QCNMF_NUMBA; nothing to compare")
    kernels.warmup()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<12}{'n':>5}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for n in (int(v) for v in args.sizes.split(",")):
        t_nb, t_np = bench_anneal(n, args.sweeps, args.restarts, args.repeats, rng)
        print(f"{'anneal':<12}{n:>5}{t_nb * 1e3:>12.2f}{t_np * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")
    for n in (int(v) for v in args.exhaustive_sizes.split(",")):
        t_nb, t_np = bench_exhaustive(n, args.repeats, rng)
        print(f"{'exhaustive':<12}{n:>5}{t_nb * 1e3:>12.2f}{t_np * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
