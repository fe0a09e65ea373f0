"""
Solving a small periodic coupled Sylvester equation
===================================================

Build a three-period problem with random coefficients, solve it through
its Kronecker form and look at the residual.
"""

import numpy as np

from pgcs import PgcsProblem, build_W, residual, solve_pgcs

rng = np.random.default_rng(0)
p, m, n = 3, 4, 2


def draw(r, c):
    return [rng.standard_normal((r, c)) for _ in range(p)]


problem = PgcsProblem(p, m, n, draw(m, m), draw(n, n), draw(m, m), draw(n, n),
                      draw(m, n), draw(m, n))

# W has order 2mnp; X_{p+1} wraps around to X_1 in its last block row
W = build_W(problem)
print("order of W:", W.shape[0], " condition number:", f"{np.linalg.cond(W):.3e}")

solution = solve_pgcs(problem)
print("X_1 =\n", solution.X[0])

res = residual(problem, solution)
print("largest residual entry:", f"{res.max_abs():.2e}")
