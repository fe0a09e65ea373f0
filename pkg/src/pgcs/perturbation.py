"""Rigorous and first-order perturbation bounds for the solution.

For data perturbations ``dA_k, ..., dF_k`` the solution change ``dz``
satisfies ``W dz = -H1 u - dW dz`` where ``u`` is the tolerance-scaled
perturbation vector and ``H1`` the scaled data operator at the exact
solution. When ``||W^{-1} dW||_2 < 1``::

    ||dz||_2 <= ||W^{-1} H1||_2 ||u||_2 / (1 - ||W^{-1} dW||_2)
             <= sqrt(6p) ||W^{-1} H1||_2 eps / (1 - ||W^{-1} dW||_2)

and when the Perron root of ``|W^{-1} dW|`` is below one::

    |dz| <= (I - |W^{-1} dW|)^{-1} |W^{-1} H1 u|
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .assembly import (build_delta_W, build_scaled_operator, dense_cap,
                       pack_perturbation_vector)
from .model import default_tolerances
from .solver import (factorize_problem, inverse_product, spectral_norm_dense,
                     spectral_radius_nonneg)

__all__ = [
    "PerturbationBoundReport",
    "ComponentwiseBoundReport",
    "scaled_epsilon",
    "normwise_bounds",
    "componentwise_bounds",
]


@dataclass(frozen=True)
class PerturbationBoundReport:
    """Normwise bounds; bound fields are ``inf`` when not applicable."""

    contraction_norm: float
    sensitivity_norm: float
    scaled_norm: float
    epsilon: float
    rigorous_normwise: float
    rigorous_normwise_eps: float
    rigorous_normwise_direct: float
    first_order_normwise: float
    applicable: bool
    methods: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ComponentwiseBoundReport:
    perron_radius: float
    perron_converged: bool
    rigorous_componentwise: np.ndarray
    first_order_componentwise: np.ndarray
    applicable: bool


def scaled_epsilon(delta, tolerances):
    """Largest ratio ``||dM_k||_F / tol`` over all ``6p`` blocks."""
    tol = tolerances.as_array()
    return max(np.linalg.norm(M) / tol[k, j]
               for k in range(delta.p) for j, M in enumerate(delta.blocks(k)))


def _norm(op, explicit, seed):
    # dense SVD inside the cap, probabilistic estimate beyond it
    if explicit:
        return spectral_norm_dense(op), "dense-exact"
    from .estimators import pce_spectral_norm
    res = pce_spectral_norm(op, seed=seed)
    return res.estimate, "estimated"


def normwise_bounds(problem, solution, delta, tolerances=None, factorization=None,
                    cap=None, seed=0):
    """Normwise perturbation bounds for the perturbation `delta`.

    Parameters
    ----------
    problem : PgcsProblem
    solution : PgcsSolution
        The exact solution of `problem`; ``H1`` is built from it.
    delta : PerturbationSet
    tolerances : ToleranceSet, optional
        Defaults to Frobenius norms of the coefficients.
    factorization : Factorization, optional
        LU factors of ``W``; computed when omitted.

    Returns
    -------
    PerturbationBoundReport
    """
    if tolerances is None:
        tolerances = default_tolerances(problem)
    if factorization is None:
        factorization = factorize_problem(problem, cap)
    m, n, p = problem.m, problem.n, problem.p
    explicit = problem.order <= dense_cap(cap)

    u = pack_perturbation_vector(delta, tolerances)
    eps = float(scaled_epsilon(delta, tolerances))
    u_norm = float(np.linalg.norm(u))

    if explicit:
        dW = build_delta_W(delta, m, n, "explicit", cap)
        H1 = build_scaled_operator(problem, solution, tolerances, "explicit", cap)
        contraction, m1 = _norm(factorization.solve(dW), True, seed)
        sens, m2 = _norm(factorization.solve(H1), True, seed)
        direct = float(np.linalg.norm(factorization.solve(H1 @ u)))
    else:
        dW = build_delta_W(delta, m, n, "implicit")
        H1 = build_scaled_operator(problem, solution, tolerances, "implicit")
        contraction, m1 = _norm(inverse_product(factorization, dW), False, seed)
        sens, m2 = _norm(inverse_product(factorization, H1), False, seed + 1)
        direct = float(np.linalg.norm(factorization.solve(H1.matvec(u))))

    first = float(np.sqrt(6 * p) * sens * eps)
    applicable = contraction < 1.0
    if applicable:
        denom = 1.0 - contraction
        rig, rig_eps, rig_dir = sens * u_norm / denom, first / denom, direct / denom
    else:
        rig = rig_eps = rig_dir = float("inf")
    return PerturbationBoundReport(
        contraction_norm=float(contraction), sensitivity_norm=float(sens),
        scaled_norm=u_norm, epsilon=eps,
        rigorous_normwise=float(rig), rigorous_normwise_eps=float(rig_eps),
        rigorous_normwise_direct=float(rig_dir), first_order_normwise=first,
        applicable=bool(applicable),
        methods={"contraction_norm": m1, "sensitivity_norm": m2},
    )


def componentwise_bounds(problem, solution, delta, tolerances=None, factorization=None,
                         cap=None):
    """Componentwise perturbation bounds (needs explicit ``W``).

    The resolvent ``(I - |W^{-1} dW|)^{-1}`` is applied with one LU solve.
    When power iteration fails to certify the Perron root, applicability is
    decided from the dense eigenvalues instead.
    """
    if tolerances is None:
        tolerances = default_tolerances(problem)
    if factorization is None:
        factorization = factorize_problem(problem, cap)
    m, n = problem.m, problem.n
    u = pack_perturbation_vector(delta, tolerances)
    H1 = build_scaled_operator(problem, solution, tolerances, "explicit", cap)
    first = np.abs(factorization.solve(H1 @ u))
    M = np.abs(factorization.solve(build_delta_W(delta, m, n, "explicit", cap)))

    perron = spectral_radius_nonneg(M)
    radius, converged = perron.value, perron.converged
    if not converged:
        radius = float(np.max(np.abs(sla.eigvals(M))))
    applicable = radius < 1.0
    if applicable:
        rig = sla.solve(np.eye(M.shape[0]) - M, first)
    else:
        rig = np.full_like(first, np.inf)
    return ComponentwiseBoundReport(float(radius), bool(converged), rig, first,
                                    bool(applicable))
