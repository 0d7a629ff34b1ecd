import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import naive_matmul
from qcnmf.errors import DomainError, ShapeError
from qcnmf.linalg import frobenius_sq, gram, matmul, objective, penalty_g, penalty_w

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
small_matrix = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda s: arrays(np.float64, s, elements=finite))


def test_matmul_examples():
    np.testing.assert_array_equal(matmul(np.eye(2), np.eye(2)), np.eye(2))
    np.testing.assert_array_equal(matmul([[1, 2], [3, 4]], [[0], [1]]), [[2], [4]])
    np.testing.assert_array_equal(matmul(np.ones((3, 2)), np.zeros((2, 4))), np.zeros((3, 4)))


def test_matmul_matches_naive_loops(rng):
    a, b = rng.normal(size=(3, 4)), rng.normal(size=(4, 2))
    np.testing.assert_allclose(matmul(a, b), naive_matmul(a.tolist(), b.tolist()), rtol=1e-12)


def test_matmul_shape_error():
    with pytest.raises(ShapeError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_nonfinite_rejected():
    with pytest.raises(DomainError):
        gram([[1.0, np.nan]])
    with pytest.raises(DomainError):
        frobenius_sq([[np.inf]])


def test_gram_examples():
    np.testing.assert_array_equal(gram(np.eye(2)), np.eye(2))
    np.testing.assert_array_equal(gram([[1, 2], [3, 4]]), [[10, 14], [14, 20]])
    np.testing.assert_array_equal(gram([[1], [2]]), [[5]])


@settings(max_examples=50, deadline=None)
@given(small_matrix)
def test_gram_symmetric_psd(x):
    g = gram(x)
    assert np.max(np.abs(g - g.T)) <= 1e-12
    v = np.random.default_rng(0).normal(size=(100, g.shape[0]))
    assert np.all(np.einsum("ij,jk,ik->i", v, g, v) >= -1e-9)


def test_frobenius_examples():
    assert frobenius_sq(np.zeros((3, 2))) == 0
    assert frobenius_sq(np.eye(2)) == 2
    assert frobenius_sq([[1, 2], [3, 4]]) == 30


@settings(max_examples=50, deadline=None)
@given(small_matrix)
def test_frobenius_is_gram_trace(x):
    f = frobenius_sq(x)
    assert f == pytest.approx(np.trace(gram(x)), rel=1e-9, abs=1e-12)


def trace_expansion(x, w, g):
    xtx = x.T @ x
    return (np.trace(xtx) - 2 * np.trace(xtx @ w @ g)
            + np.trace(w.T @ xtx @ w @ g @ g.T))


def test_objective_examples(rng):
    assert objective(np.eye(2), np.eye(2), np.eye(2)) == 0
    x = rng.normal(size=(3, 4))
    assert objective(x, np.zeros((4, 2)), rng.random((2, 4))) == pytest.approx(frobenius_sq(x))


@pytest.mark.parametrize("m,n,k", [(3, 3, 3), (1, 1, 1), (5, 5, 2), (2, 5, 4), (5, 2, 1)])
def test_objective_matches_trace_expansion(rng, m, n, k):
    for _ in range(20):
        x, w, g = rng.normal(size=(m, n)), rng.random((n, k)), rng.random((k, n))
        assert objective(x, w, g) == pytest.approx(trace_expansion(x, w, g), rel=1e-9, abs=1e-12)


def test_objective_shape_errors():
    with pytest.raises(ShapeError):
        objective(np.ones((2, 3)), np.ones((2, 2)), np.ones((2, 3)))
    with pytest.raises(ShapeError):
        objective(np.ones((2, 3)), np.ones((3, 2)), np.ones((3, 3)))


def test_penalty_examples():
    assert penalty_g([[0.5, 0.5], [0.25, 0.75]]) == 0
    assert penalty_g(np.zeros((3, 4))) == 3
    assert penalty_g([[0.5, 0.25]]) == 0.0625
    assert penalty_w([[0.5, 1.0], [0.5, 0.0]]) == 0
    assert penalty_w(np.zeros((4, 2))) == 2


def penalty_expansion(g):
    """Separated form: 1 - 2 sum g + sum_{n != n'} g g' + sum g^2, per row."""
    total = 0.0
    for row in g:
        cross = sum(row[i] * row[j] for i in range(len(row)) for j in range(len(row)) if i != j)
        total += 1 - 2 * row.sum() + cross + np.sum(row ** 2)
    return total


def test_penalty_matches_separated_expansion(rng):
    for _ in range(50):
        g = rng.random((rng.integers(1, 4), rng.integers(1, 5)))
        assert abs(penalty_g(g) - penalty_expansion(g)) <= 1e-12
        assert abs(penalty_w(g.T) - penalty_expansion(g)) <= 1e-12
