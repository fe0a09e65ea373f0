import numpy as np
import pytest

from conftest import (apply_equation, dense_from_loop, random_delta, random_problem,
                      scalar_problem, scalar_solution)
from pgcs.assembly import (build_delta_W, build_scaled_operator, build_W, dense_cap,
                           pack_data_vector, pack_perturbation_vector, pack_rhs,
                           pack_solution, unpack_perturbation_vector, unpack_solution)
from pgcs.errors import DataError, DimensionError, SizeCapError
from pgcs.model import PerturbationSet, PgcsProblem, PgcsSolution, ToleranceSet


def perturbed_lhs(problem, solution, delta):
    # dA X - Y dB - dE, dC X_{k+1} - Y dD - dF straight from the definition
    out = []
    for k in range(problem.p):
        X, Y, Xn = solution.X[k], solution.Y[k], solution.x_next(k)
        out.append(delta.dA[k] @ X - Y @ delta.dB[k] - delta.dE[k])
        out.append(delta.dC[k] @ Xn - Y @ delta.dD[k] - delta.dF[k])
    return np.concatenate([M.reshape(-1, order="F") for M in out])


def test_W_scalar():
    np.testing.assert_array_equal(build_W(scalar_problem()), [[2, -1], [1, -3]])


def test_W_identity_blocks():
    m, n = 3, 2
    prob = PgcsProblem(1, m, n, [np.eye(m)], [np.zeros((n, n))], [np.zeros((m, m))],
                       [-np.eye(n)], [np.zeros((m, n))], [np.zeros((m, n))])
    np.testing.assert_array_equal(build_W(prob), np.eye(2 * m * n))


@pytest.mark.parametrize("p,m,n", [(1, 2, 3), (2, 1, 1), (3, 5, 4), (4, 2, 2)])
def test_W_matches_definition(rng, p, m, n):
    prob = random_problem(rng, p, m, n)
    W = build_W(prob)
    np.testing.assert_allclose(W, dense_from_loop(prob), rtol=0, atol=1e-14)
    op = build_W(prob, "implicit")
    for _ in range(3):
        z, w = rng.standard_normal(prob.order), rng.standard_normal(prob.order)
        np.testing.assert_allclose(op.matvec(z), W @ z, rtol=1e-13, atol=1e-13)
        np.testing.assert_allclose(op.rmatvec(w), W.T @ w, rtol=1e-13, atol=1e-13)
        np.testing.assert_allclose(op.matvec(z), apply_equation(prob, z), atol=1e-13)


def test_delta_W(rng):
    prob = random_problem(rng, 3, 2, 3)
    zero = build_delta_W(PerturbationSet.zeros(prob), 2, 3)
    assert zero.shape == (36, 36) and not zero.any()
    np.testing.assert_array_equal(build_delta_W(PerturbationSet.from_problem(prob), 2, 3),
                                  build_W(prob))
    delta = random_delta(rng, prob)
    dW = build_delta_W(delta, 2, 3)
    op = build_delta_W(delta, 2, 3, "implicit")
    z = rng.standard_normal(36)
    np.testing.assert_allclose(op.matvec(z), dW @ z, atol=1e-13)
    np.testing.assert_allclose(op.rmatvec(z), dW.T @ z, atol=1e-13)


def test_H2_scalar():
    H2 = build_scaled_operator(scalar_problem(), scalar_solution())
    np.testing.assert_allclose(H2, [[0.2, 0.6, -1, 0, 0, 0], [0, 0, 0, 0.2, 0.6, -1]])


def test_scaled_operator_zero_solution(rng):
    prob = random_problem(rng, 2, 2, 2)
    zero = PgcsSolution([np.zeros((2, 2))] * 2, [np.zeros((2, 2))] * 2)
    H = build_scaled_operator(prob, zero)
    t = pack_data_vector(prob)
    # only the -I columns of the E and F blocks remain
    expected = np.zeros_like(H)
    per = 2 * (4 + 4 + 4)
    for k in range(2):
        for j, off in ((0, 8), (1, 20)):
            rows = slice((2 * k + j) * 4, (2 * k + j + 1) * 4)
            expected[rows, k * per + off:k * per + off + 4] = -np.eye(4)
    np.testing.assert_array_equal(H, expected)
    assert t.shape == (per * 2,)


@pytest.mark.parametrize("p,m,n", [(1, 1, 1), (2, 3, 2), (3, 2, 4)])
def test_scaled_operator_matches_definition(rng, p, m, n):
    prob = random_problem(rng, p, m, n)
    sol = PgcsSolution([rng.standard_normal((m, n)) for _ in range(p)],
                       [rng.standard_normal((m, n)) for _ in range(p)])
    tol = ToleranceSet.from_array(rng.uniform(0.5, 2.0, (p, 6)))
    H = build_scaled_operator(prob, sol, tol)
    op = build_scaled_operator(prob, sol, tol, "implicit")
    delta = random_delta(rng, prob)
    u = pack_perturbation_vector(delta, tol)
    np.testing.assert_allclose(H @ u, perturbed_lhs(prob, sol, delta), atol=1e-12)
    np.testing.assert_allclose(op.matvec(u), H @ u, rtol=1e-13, atol=1e-13)
    w = rng.standard_normal(prob.order)
    np.testing.assert_allclose(op.rmatvec(w), H.T @ w, rtol=1e-13, atol=1e-13)


def test_pack_vectors(rng):
    prob = scalar_problem()
    np.testing.assert_array_equal(pack_data_vector(prob), [2, 1, 1, 1, 3, 2])
    np.testing.assert_array_equal(pack_rhs(prob), [1, 2])
    tol = ToleranceSet.from_array([[4, 1, 1, 1, 1, 1]])
    delta = PerturbationSet([[[4.0]]], [[[0.0]]], [[[0.0]]], [[[0.0]]], [[[0.0]]], [[[0.0]]])
    np.testing.assert_array_equal(pack_perturbation_vector(delta, tol), [1, 0, 0, 0, 0, 0])


def test_perturbation_vector_roundtrip(rng):
    prob = random_problem(rng, 3, 3, 2)
    delta = random_delta(rng, prob)
    tol = ToleranceSet.from_array(rng.uniform(0.5, 2.0, (3, 6)))
    back = unpack_perturbation_vector(pack_perturbation_vector(delta, tol), tol, 3, 3, 2)
    for name in "ABCDEF":
        for M, N in zip(getattr(delta, "d" + name), getattr(back, "d" + name)):
            np.testing.assert_allclose(N, M, rtol=1e-15)
    with pytest.raises(DimensionError):
        unpack_perturbation_vector(np.zeros(5), tol, 3, 3, 2)


def test_solution_roundtrip(rng):
    z = rng.standard_normal(2 * 3 * 2 * 4)
    np.testing.assert_array_equal(pack_solution(unpack_solution(z, 4, 3, 2)), z)
    with pytest.raises(DimensionError):
        unpack_solution(z[:-1], 4, 3, 2)


def test_size_cap(rng, monkeypatch):
    prob = random_problem(rng, 3, 5, 4)
    with pytest.raises(SizeCapError):
        build_W(prob, cap=100)
    monkeypatch.setenv("PGCS_DENSE_CAP", "50")
    assert dense_cap() == 50
    with pytest.raises(SizeCapError):
        build_W(prob)
    # implicit operators are not capped
    assert build_W(prob, "implicit").shape == (120, 120)
    monkeypatch.setenv("PGCS_DENSE_CAP", "lots")
    with pytest.raises(DataError):
        dense_cap()


def test_bad_mode(rng):
    with pytest.raises(ValueError):
        build_W(random_problem(rng, 1, 1, 1), "sparse")
