"""Normwise backward error of an approximate solution.

With ``r`` the stacked residual and ``Hhat`` the scaled data operator built
from the candidate, the minimum-norm ``u = Hhat^+ r`` brackets the backward
error::

    ||u||_2 / sqrt(6p) <= eta <= ||u||_2
"""

from dataclasses import dataclass

import numpy as np

from .assembly import scaled_operator_block, unpack_perturbation_vector
from .errors import RankDeficientError
from .model import PerturbationSet, ToleranceSet, default_tolerances, residual
from .solver import min_norm_ls_solve

__all__ = ["BackwardErrorReport", "backward_error_bounds"]


@dataclass(frozen=True)
class BackwardErrorReport:
    lower: float
    upper: float
    perturbation: PerturbationSet
    scaled_vector: np.ndarray
    tolerances: ToleranceSet

    @property
    def attaining_perturbation(self):
        return self.perturbation


def backward_error_bounds(problem, candidate, tolerances=None):
    """Lower and upper bounds on the normwise backward error of `candidate`.

    Parameters
    ----------
    problem : PgcsProblem
    candidate : PgcsSolution
    tolerances : ToleranceSet, optional
        Defaults to the Frobenius norms of the coefficients.

    Returns
    -------
    BackwardErrorReport
        Also carries the perturbation attaining the upper bound, with each
        block multiplied back by its tolerance, so that
        ``apply_perturbation(problem, report.perturbation)`` is solved exactly
        by `candidate`.
    """
    if tolerances is None:
        tolerances = default_tolerances(problem)
    p, m, n = problem.p, problem.m, problem.n
    r = residual(problem, candidate).vector()
    rows = 2 * m * n

    # Hhat is block diagonal over periods, so the min-norm solve splits
    pieces = []
    for k in range(p):
        Hk = scaled_operator_block(candidate, tolerances, k, m, n)
        try:
            pieces.append(min_norm_ls_solve(Hk, r[k * rows:(k + 1) * rows]))
        except RankDeficientError as exc:
            raise RankDeficientError(f"period {k + 1}: {exc}", exc.solution, exc.rank) from exc
    u = np.concatenate(pieces)
    upper = float(np.linalg.norm(u))
    lower = upper / np.sqrt(6 * p)
    delta = unpack_perturbation_vector(u, tolerances, p, m, n)
    return BackwardErrorReport(lower, upper, delta, u, tolerances)
