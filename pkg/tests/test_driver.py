import itertools

import numpy as np
import pytest

from qcnmf.builders import BuilderConfig, build_g_qubo, build_w_qubo, g_layout, w_layout
from qcnmf.driver import (FactorizationConfig, assign_clusters, centroids, init_w,
                          permutation_accuracy, run)
from qcnmf.encoding import EncodingScheme, decode_matrix
from qcnmf.errors import CapacityError, ConfigError
from qcnmf.linalg import matmul, objective, penalty_g, penalty_w
from qcnmf.solvers import SaSchedule

HALF = EncodingScheme(0.5, 1)


def test_init_w_properties():
    s = EncodingScheme(0.001, 9)
    for n, k, seed in [(5, 1, 0), (20, 2, 3), (3, 3, 9)]:
        w = init_w(n, k, s, seed)
        assert w.shape == (n, k)
        assert np.all(w >= 0) and np.all(w <= s.max_value)
        np.testing.assert_allclose(w / s.alpha, np.rint(w / s.alpha), atol=1e-9)
        assert np.all(np.abs(w.sum(axis=0) - 1) <= n * s.alpha / 2 + 1e-12)
        np.testing.assert_array_equal(w, init_w(n, k, s, seed))


def test_init_w_rescues_zero_columns():
    coarse = EncodingScheme(1.0, 0)
    w = init_w(10, 2, coarse, 1)
    assert np.all(w.sum(axis=0) >= 1.0)


def test_assign_clusters():
    np.testing.assert_array_equal(assign_clusters(np.eye(2)), [0, 1])
    np.testing.assert_array_equal(assign_clusters([[0.3, 0.1], [0.3, 0.2]]), [0, 1])
    g = np.random.default_rng(0).random((3, 8))
    perm = [2, 0, 1]
    np.testing.assert_array_equal(np.argsort(perm)[assign_clusters(g)],
                                  assign_clusters(g[perm]))


def test_centroids():
    x = np.arange(8.0).reshape(2, 4)
    np.testing.assert_array_equal(centroids(x, np.eye(4)[:, [1, 3]]), x[:, [1, 3]])
    np.testing.assert_allclose(centroids(x, np.full((4, 1), 0.25)), x.mean(axis=1, keepdims=True))
    np.testing.assert_array_equal(centroids(np.eye(2), [[0.5, 0], [0.5, 1]]),
                                  [[0.5, 0], [0.5, 1]])


def test_permutation_accuracy():
    assert permutation_accuracy([1, 1, 0, 0], [0, 0, 1, 1]) == 1.0
    assert permutation_accuracy([0, 0, 0, 0], [0, 0, 1, 1]) == 0.5
    assert permutation_accuracy([0, 1, 1, 1], [0, 0, 1, 1]) == 0.75


def exhaustive_min_over_grid(f, layout):
    best = np.inf
    for q in itertools.product([0, 1], repeat=layout.total_bits):
        best = min(best, f(decode_matrix(layout, np.array(q))))
    return best


def test_half_step_optimality_exhaustive():
    x = np.eye(2)
    cfg = FactorizationConfig(2, HALF, 1.0, solver="exhaustive", seed=4)
    res = run(x, cfg)
    w0 = init_w(2, 2, HALF, 4)
    bcfg = cfg.builder
    g_val = objective(x, w0, res.g) + penalty_g(res.g)
    best = exhaustive_min_over_grid(lambda g: objective(x, w0, g) + penalty_g(g),
                                    g_layout(2, bcfg))
    assert g_val == pytest.approx(best, abs=1e-12)
    w_val = objective(x, res.w, res.g) + penalty_w(res.w)
    best = exhaustive_min_over_grid(lambda w: objective(x, w, res.g) + penalty_w(w),
                                    w_layout(2, bcfg))
    assert w_val == pytest.approx(best, abs=1e-12)
    # each half-step cannot be worse than keeping the previous factor
    assert w_val <= objective(x, w0, res.g) + penalty_w(w0) + 1e-12


def test_duplicate_column_reconstructs_exactly():
    x = np.array([[0.3, 0.3], [0.7, 0.7]])
    res = run(x, FactorizationConfig(1, HALF, 0.0, solver="exhaustive"))
    # w = (0.5, 0.5) and g = (1, 1) are on the grid and give XWG = X
    assert res.objective_trace[0][1] == pytest.approx(0.0, abs=1e-12)
    assert res.objective == pytest.approx(0.0, abs=1e-12)


def test_trace_and_invariants(rng):
    x = rng.random((2, 6))
    cfg = FactorizationConfig(2, EncodingScheme(0.01, 6), 1.0, iterations=2, seed=1,
                              schedule=SaSchedule(5.0, 1e-4, 200, 3))
    res = run(x, cfg)
    assert [t[0] for t in res.objective_trace] == ["g0", "w0", "g1", "w1"]
    assert res.w.shape == (6, 2) and res.g.shape == (2, 6)
    s = cfg.scheme
    for f in (res.w, res.g):
        assert np.all(f >= 0) and np.all(f <= s.max_value + 1e-12)
        np.testing.assert_allclose(f / s.alpha, np.rint(f / s.alpha), atol=1e-9)
    np.testing.assert_array_equal(res.centroids, matmul(x, res.w))
    np.testing.assert_array_equal(res.labels, assign_clusters(res.g))
    t = res.timings
    assert t["total"] >= t["build_g"] + t["solve_g"] + t["build_w"] + t["solve_w"]
    dev = res.sum_deviations()
    assert dev["g_row_sum"] >= 0 and dev["w_col_sum"] >= 0
    last = res.objective_trace[-1]
    assert last[1] == pytest.approx(objective(x, res.w, res.g))
    assert last[2] == pytest.approx(penalty_g(res.g))


def test_run_deterministic(rng):
    x = rng.random((2, 5))
    cfg = FactorizationConfig(2, EncodingScheme(0.01, 5), seed=8, sweeps=100, restarts=2)
    a, b = run(x, cfg), run(x, cfg)
    np.testing.assert_array_equal(a.w, b.w)
    np.testing.assert_array_equal(a.g, b.g)
    assert a.objective_trace == b.objective_trace
    assert a.g_solve.same_outcome(b.g_solve) and a.w_solve.same_outcome(b.w_solve)


def test_on_qubo_callback(rng):
    x = rng.random((2, 3))
    seen = {}
    run(x, FactorizationConfig(1, HALF, solver="exhaustive"),
        on_qubo=lambda label, m: seen.setdefault(label, m))
    assert set(seen) == {"g0", "w0"}
    assert seen["g0"].num_vars == 6


def test_zero_data_allowed():
    res = run(np.zeros((2, 3)), FactorizationConfig(1, HALF, solver="exhaustive"))
    assert res.objective == 0.0
    assert res.objective_trace[0][2] == pytest.approx(0.0)


def test_config_errors():
    with pytest.raises(ConfigError):
        run(np.ones((2, 2)), FactorizationConfig(3, HALF))
    with pytest.raises(ConfigError):
        FactorizationConfig(1, iterations=0)
    with pytest.raises(ConfigError):
        FactorizationConfig(1, solver="qpu")
    with pytest.raises(CapacityError):
        run(np.ones((2, 20)), FactorizationConfig(2, solver="exhaustive"))


def test_builder_config_echo():
    cfg = FactorizationConfig(3, EncodingScheme(0.01, 4), 0.5, "paper")
    assert cfg.builder == BuilderConfig(3, EncodingScheme(0.01, 4), 0.5, "paper")
    d = cfg.to_dict()
    assert d["mode"] == "paper" and d["b_max"] == 4 and d["alpha"] == 0.01
