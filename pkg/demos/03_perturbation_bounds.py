"""
Perturbation bounds versus the actual change
============================================

Normwise and componentwise bounds on the change of the solution are compared
with the change obtained by solving the perturbed problem.
"""

import numpy as np

from pgcs import (PerturbationSet, apply_perturbation, componentwise_bounds,
                  normwise_bounds, pack_solution, solve_pgcs)
from pgcs.experiments import random_problem

rng = np.random.default_rng(2)
problem = random_problem(rng, p=3, m=3, n=2)
solution = solve_pgcs(problem)
z = pack_solution(solution)

for scale in (1e-2, 1e-5, 1e-8):
    def draw(shape_list):
        return [scale * rng.standard_normal(M.shape) for M in shape_list]
    delta = PerturbationSet(draw(problem.A), draw(problem.B), draw(problem.C),
                            draw(problem.D), draw(problem.E), draw(problem.F))
    dz = pack_solution(solve_pgcs(apply_perturbation(problem, delta))) - z
    nw = normwise_bounds(problem, solution, delta)
    cw = componentwise_bounds(problem, solution, delta)
    print(f"scale {scale:.0e}")
    print(f"  ||dz||            {np.linalg.norm(dz):.3e}")
    print(f"  rigorous bound    {nw.rigorous_normwise:.3e}")
    print(f"  first-order bound {nw.first_order_normwise:.3e}")
    # componentwise: how tight is the bound on the worst entry?
    print(f"  max |dz_i| / bound_i  {np.max(np.abs(dz) / cw.rigorous_componentwise):.3f}")
