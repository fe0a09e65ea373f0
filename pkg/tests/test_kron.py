import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pgcs.errors import DimensionError
from pgcs.kron import apply_sandwich, kronecker, unvectorize, vectorize


def test_vectorize_stacks_columns():
    assert vectorize([[1, 2], [3, 4]]).tolist() == [1, 3, 2, 4]
    assert vectorize(np.eye(2)).tolist() == [1, 0, 0, 1]


def test_vectorize_matches_loop(rng):
    M = rng.standard_normal((3, 2))
    loop = [M[i, j] for j in range(2) for i in range(3)]
    np.testing.assert_array_equal(vectorize(M), loop)


def test_vectorize_rejects_vectors():
    with pytest.raises(DimensionError):
        vectorize([1.0, 2.0])


def test_unvectorize():
    np.testing.assert_array_equal(unvectorize([1, 3, 2, 4], 2, 2), [[1, 2], [3, 4]])
    np.testing.assert_array_equal(unvectorize([5], 1, 1), [[5]])
    with pytest.raises(DimensionError):
        unvectorize(np.arange(7.0), 2, 3)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)),
              elements=st.floats(-1e6, 1e6)))
def test_vec_roundtrip(M):
    np.testing.assert_array_equal(unvectorize(vectorize(M), *M.shape), M)


def test_kronecker_small_cases():
    B = np.array([[1.0, 2], [3, 4]])
    K = kronecker(np.eye(2), B)
    np.testing.assert_array_equal(K[:2, :2], B)
    np.testing.assert_array_equal(K[2:, 2:], B)
    assert not K[:2, 2:].any() and not K[2:, :2].any()
    assert kronecker([[2.0]], [[3.0]]).tolist() == [[6.0]]


def test_kronecker_matches_definition(rng):
    A, B = rng.standard_normal((2, 3)), rng.standard_normal((3, 2))
    K = np.zeros((6, 6))
    for i in range(2):
        for j in range(3):
            for r in range(3):
                for s in range(2):
                    K[i * 3 + r, j * 2 + s] = A[i, j] * B[r, s]
    np.testing.assert_array_equal(kronecker(A, B), K)


def test_apply_sandwich(rng):
    x = rng.standard_normal(6)
    np.testing.assert_array_equal(apply_sandwich(np.eye(3), np.eye(2), x), x)
    assert apply_sandwich([[2.0]], [[3.0]], [1.0]).tolist() == [6.0]
    A, C = rng.standard_normal((3, 3)), rng.standard_normal((2, 2))
    np.testing.assert_allclose(apply_sandwich(A, C, x), kronecker(C.T, A) @ x,
                               rtol=1e-13, atol=1e-14)


def test_apply_sandwich_rectangular(rng):
    A, C = rng.standard_normal((4, 3)), rng.standard_normal((2, 5))
    X = rng.standard_normal((3, 2))
    np.testing.assert_allclose(apply_sandwich(A, C, vectorize(X)), vectorize(A @ X @ C))
