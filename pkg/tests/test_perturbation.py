import numpy as np
import pytest

from conftest import random_delta, random_problem, scalar_problem
from pgcs.assembly import pack_rhs, pack_solution
from pgcs.model import PerturbationSet, ToleranceSet, apply_perturbation
from pgcs.perturbation import componentwise_bounds, normwise_bounds, scaled_epsilon
from pgcs.solver import factorize_problem, solve_pgcs


def change(prob, delta):
    z = pack_solution(solve_pgcs(prob))
    return pack_solution(solve_pgcs(apply_perturbation(prob, delta))) - z


def test_zero_delta(rng):
    prob = random_problem(rng, 2, 2, 2)
    sol = solve_pgcs(prob)
    zero = PerturbationSet.zeros(prob)
    rep = normwise_bounds(prob, sol, zero)
    assert rep.contraction_norm == 0.0 and rep.applicable
    assert rep.rigorous_normwise == rep.rigorous_normwise_eps == rep.first_order_normwise == 0.0
    cw = componentwise_bounds(prob, sol, zero)
    assert not cw.rigorous_componentwise.any() and not cw.first_order_componentwise.any()
    assert cw.perron_radius == 0.0


def test_scalar_instance():
    prob = scalar_problem()
    delta = PerturbationSet([[[1e-3]]], [[[0.0]]], [[[0.0]]], [[[0.0]]], [[[0.0]]], [[[0.0]]])
    rep = normwise_bounds(prob, solve_pgcs(prob), delta)
    actual = np.linalg.norm(change(prob, delta))
    assert rep.applicable
    assert actual <= rep.rigorous_normwise <= rep.rigorous_normwise_eps
    assert actual <= rep.rigorous_normwise_direct <= rep.rigorous_normwise
    # only dA is nonzero, so eps is its scaled norm and ||u|| = eps
    assert rep.epsilon == pytest.approx(1e-3 / 2.0)
    assert rep.scaled_norm == pytest.approx(rep.epsilon)


def test_first_order_attainability(rng):
    for _ in range(10):
        prob = random_problem(rng, 3, 3, 2)
        delta = random_delta(rng, prob, 1e-8)
        rep = normwise_bounds(prob, solve_pgcs(prob), delta)
        ratio = np.linalg.norm(change(prob, delta)) / rep.first_order_normwise
        assert 0 < ratio <= 1 + 1e-4


def test_componentwise_domination(rng):
    for scale in (1e-3, 1e-8):
        prob = random_problem(rng, 2, 3, 2)
        delta = random_delta(rng, prob, scale)
        cw = componentwise_bounds(prob, solve_pgcs(prob), delta)
        assert cw.applicable and cw.perron_converged
        dz = np.abs(change(prob, delta))
        assert np.all(dz <= cw.rigorous_componentwise * (1 + 1e-10) + 1e-15)
        assert np.all(cw.first_order_componentwise <= cw.rigorous_componentwise * (1 + 1e-12))


def test_rhs_only_perturbation(rng):
    # with dE_1 alone, H1 u = -vec(dE_1) padded, so the first-order vector is
    # exactly |W^{-1} x| and is dominated by |W^{-1}| |x|
    prob = random_problem(rng, 2, 2, 2)
    fac = factorize_problem(prob)
    zero = PerturbationSet.zeros(prob)
    dE = rng.standard_normal((2, 2)) * 1e-4
    delta = PerturbationSet(zero.dA, zero.dB, zero.dC, zero.dD, (dE, zero.dE[1]), zero.dF)
    x = np.zeros(prob.order)
    x[:4] = dE.reshape(-1, order="F")
    cw = componentwise_bounds(prob, solve_pgcs(prob, fac), delta, factorization=fac)
    np.testing.assert_allclose(cw.first_order_componentwise, np.abs(fac.solve(x)),
                               rtol=1e-12)
    assert np.all(cw.first_order_componentwise <= np.abs(fac.inverse()) @ np.abs(x) + 1e-18)
    # dW = 0 here, so the rigorous and first-order vectors coincide
    np.testing.assert_allclose(cw.rigorous_componentwise, cw.first_order_componentwise)


def test_not_applicable(rng):
    prob = random_problem(rng, 1, 2, 2)
    delta = PerturbationSet.from_problem(prob).scaled(-1.0)
    rep = normwise_bounds(prob, solve_pgcs(prob), delta)
    assert not rep.applicable and np.isinf(rep.rigorous_normwise)
    assert np.isfinite(rep.first_order_normwise)
    cw = componentwise_bounds(prob, solve_pgcs(prob), delta)
    assert not cw.applicable and np.all(np.isinf(cw.rigorous_componentwise))


def test_implicit_path_matches_dense(rng, monkeypatch):
    prob = random_problem(rng, 2, 2, 2)
    sol = solve_pgcs(prob)
    delta = random_delta(rng, prob, 1e-3)
    dense = normwise_bounds(prob, sol, delta)
    # force the estimated norms by lowering the cap below the order
    monkeypatch.setenv("PGCS_DENSE_CAP", "10")
    fac = factorize_problem(prob, cap=prob.order)
    est = normwise_bounds(prob, sol, delta, factorization=fac, seed=3)
    assert est.methods["sensitivity_norm"] == "estimated"
    assert est.sensitivity_norm == pytest.approx(dense.sensitivity_norm, rel=1e-2)
    assert est.contraction_norm == pytest.approx(dense.contraction_norm, rel=1e-2)


def test_scaled_epsilon():
    prob = scalar_problem()
    delta = PerturbationSet([[[1.0]]], [[[0.0]]], [[[0.0]]], [[[6.0]]], [[[0.0]]], [[[0.0]]])
    tol = ToleranceSet.from_array([[2, 1, 1, 1, 3, 1]])
    assert scaled_epsilon(delta, tol) == 2.0
    assert pack_rhs(prob).size == 2
