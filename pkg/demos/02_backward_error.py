"""
How far is an approximate solution from being exact?
====================================================

Perturb the exact solution, bracket its normwise backward error, and check
that the perturbation attaining the upper bound really makes the candidate
an exact solution of a nearby problem.
"""

import numpy as np

from pgcs import (PgcsSolution, apply_perturbation, backward_error_bounds, residual,
                  solve_pgcs)
from pgcs.experiments import random_problem

rng = np.random.default_rng(1)
problem = random_problem(rng, p=2, m=3, n=3)
exact = solve_pgcs(problem)

for noise in (1e-12, 1e-8, 1e-4):
    candidate = PgcsSolution(
        [X + noise * rng.standard_normal(X.shape) for X in exact.X],
        [Y + noise * rng.standard_normal(Y.shape) for Y in exact.Y])
    rep = backward_error_bounds(problem, candidate)
    print(f"noise {noise:.0e}:  {rep.lower:.3e} <= eta <= {rep.upper:.3e}")

# the upper bound is attained by an explicit data perturbation
nearby = apply_perturbation(problem, rep.attaining_perturbation)
print("residual of the candidate in the nearby problem:",
      f"{residual(nearby, candidate).max_abs():.1e}")
