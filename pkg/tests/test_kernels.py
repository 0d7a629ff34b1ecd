"""The numba and numpy kernels must agree."""

import numpy as np
import pytest

from qcnmf import kernels
from qcnmf._accel import HAVE_NUMBA
from qcnmf.solvers import SaSchedule, restart_stream, solve_exhaustive, solve_sa
from test_qubo import random_model

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@needs_numba
def test_anneal_backends_identical(rng):
    model = random_model(rng, 18, density=0.6)
    sched = SaSchedule(4.0, 0.01, 60, 3)
    streams = [restart_stream(2, r, 18, sched.sweeps) for r in range(3)]
    q0 = np.stack([s[0] for s in streams])
    u = np.stack([s[1] for s in streams])
    a = kernels.anneal(model.linear, model.coupling, q0, u, sched.temperatures(), use_numba=True)
    b = kernels.anneal(model.linear, model.coupling, q0, u, sched.temperatures(), use_numba=False)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    np.testing.assert_array_equal(a[2], b[2])


@needs_numba
def test_solve_sa_backends_identical(rng):
    model = random_model(rng, 12)
    a = solve_sa(model, SaSchedule(3.0, 0.01, 80, 4), 7, use_numba=True)
    b = solve_sa(model, SaSchedule(3.0, 0.01, 80, 4), 7, use_numba=False)
    assert a.same_outcome(b)


@needs_numba
@pytest.mark.parametrize("n", [1, 5, 13])
def test_exhaustive_backends_identical(rng, n):
    for _ in range(5):
        model = random_model(rng, n, density=0.5)
        a = solve_exhaustive(model, use_numba=True)
        b = solve_exhaustive(model, use_numba=False)
        np.testing.assert_array_equal(a.assignment, b.assignment)


def test_numpy_anneal_energy_bookkeeping(rng):
    model = random_model(rng, 9)
    sched = SaSchedule(2.0, 0.05, 25, 2)
    streams = [restart_stream(0, r, 9, sched.sweeps) for r in range(2)]
    best, e, _ = kernels.anneal(model.linear, model.coupling, np.stack([s[0] for s in streams]),
                                np.stack([s[1] for s in streams]), sched.temperatures(),
                                use_numba=False)
    for q, er in zip(best, e):
        assert er + model.offset == pytest.approx(model.energy(q), abs=1e-9)


def test_env_flag_disables_numba():
    import subprocess
    import sys
    out = subprocess.run(
        [sys.executable, "-c", "from qcnmf import _accel; print(_accel.USE_NUMBA)"],
        env={**__import__("os").environ, "QCNMF_NUMBA": "0"},
        capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
