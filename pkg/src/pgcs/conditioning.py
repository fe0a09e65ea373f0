"""Condition numbers of the PGCS solution map.

``DPsi(t) = -W^{-1} H2`` is the derivative of the solution with respect to
the stacked data vector ``t``. From it:

* ``k_N1 = ||W^{-1} H1||_2 / ||z||_2`` (normwise, tolerance weighted),
* ``k_N2 = ||W^{-1} H2||_2 ||t||_2 / ||z||_2``,
* ``k_E  = ||W^{-1}||_2 ||g||_2 / ||z||_2`` (right-hand side only),
* ``mixed = ||omega||_inf / ||z||_inf`` and ``componentwise = ||omega / z||_inf``
  with ``omega = |W^{-1} H2| |t|``.
"""

from dataclasses import dataclass, field

import numpy as np

from .assembly import (pack_data_vector, pack_rhs, pack_solution,
                       scaled_operator_block)
from .model import BLOCKS, ToleranceSet, default_tolerances
from .solver import factorize_problem, solve_pgcs, spectral_norm_dense

__all__ = [
    "ConditionReport",
    "entrywise_divide",
    "pseudo_reciprocal",
    "omega_vector",
    "condition_numbers",
    "condition_upper_bounds",
]


@dataclass(frozen=True)
class ConditionReport:
    k_N1: float
    k_N2: float
    k_E: float
    mixed: float
    componentwise: float
    mixed_upper: float
    componentwise_upper: float
    tolerances: ToleranceSet
    methods: dict = field(default_factory=dict)

    def as_dict(self):
        return {name: getattr(self, name) for name in
                ("k_N1", "k_N2", "k_E", "mixed", "componentwise",
                 "mixed_upper", "componentwise_upper")}


def entrywise_divide(a, b):
    """``a_i / b_i`` where ``b_i != 0`` and ``a_i`` where ``b_i == 0``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    zero = b == 0
    return np.where(zero, a, a / np.where(zero, 1.0, b))


def pseudo_reciprocal(a):
    """Diagonal of ``diag(a)^‡``: ``1/a_i`` for nonzero entries, 1 otherwise."""
    a = np.asarray(a, dtype=float)
    zero = a == 0
    return np.where(zero, 1.0, 1.0 / np.where(zero, 1.0, a))


def _h2_slabs(problem, solution):
    """Yield ``(row_slice, H2 columns, data block)`` one data block at a time."""
    m, n = problem.m, problem.n
    mn = m * n
    unit = ToleranceSet.unit(problem.p)
    widths = (m * m, n * n, mn, m * m, n * n, mn)
    for k in range(problem.p):
        Hk = scaled_operator_block(solution, unit, k, m, n)
        rows = slice(2 * k * mn, (2 * k + 2) * mn)
        col = 0
        for j, M in enumerate(problem.blocks(k)):
            yield rows, Hk[:, col:col + widths[j]], M
            col += widths[j]


def omega_vector(problem, solution, factorization):
    """``|W^{-1} H2| |t|`` accumulated one data block at a time.

    Each term is ``|W^{-1} H2[:, block]| |vec(block)|``; summation follows
    the canonical block order so the result is reproducible.
    """
    N = problem.order
    omega = np.zeros(N)
    for rows, cols, M in _h2_slabs(problem, solution):
        slab = np.zeros((N, cols.shape[1]))
        slab[rows] = cols
        omega += np.abs(factorization.solve(slab)) @ np.abs(M.reshape(-1, order="F"))
    return omega


def _stacked_abs_residual_terms(problem, solution):
    # [|A_k||X_k| + |Y_k||B_k| + |E_k| ; |C_k||X_{k+1}| + |Y_k||D_k| + |F_k|]
    parts = []
    for k in range(problem.p):
        X, Y, Xn = (np.abs(solution.X[k]), np.abs(solution.Y[k]),
                    np.abs(solution.x_next(k)))
        parts.append(np.abs(problem.A[k]) @ X + Y @ np.abs(problem.B[k]) + np.abs(problem.E[k]))
        parts.append(np.abs(problem.C[k]) @ Xn + Y @ np.abs(problem.D[k]) + np.abs(problem.F[k]))
    return max(float(np.max(P)) for P in parts)


def condition_upper_bounds(problem, solution=None, factorization=None, cap=None):
    """Cheap upper bounds for the mixed and componentwise condition numbers.

    Returns
    -------
    (mixed_upper, componentwise_upper) : tuple of float
    """
    if factorization is None:
        factorization = factorize_problem(problem, cap)
    if solution is None:
        solution = solve_pgcs(problem, factorization)
    Winv = factorization.inverse()
    z = pack_solution(solution)
    s = _stacked_abs_residual_terms(problem, solution)
    mixed_upper = np.max(np.sum(np.abs(Winv), axis=1)) / np.max(np.abs(z)) * s
    scaled = pseudo_reciprocal(z)[:, None] * Winv
    comp_upper = np.max(np.sum(np.abs(scaled), axis=1)) * s
    return float(mixed_upper), float(comp_upper)


def condition_numbers(problem, solution=None, tolerances=None, factorization=None, cap=None):
    """Exact condition numbers on the dense path.

    Parameters
    ----------
    problem : PgcsProblem
    solution : PgcsSolution, optional
        Exact solution; computed when omitted.
    tolerances : ToleranceSet, optional
        Weights for ``H1`` in ``k_N1``; Frobenius norms of the data by default.
    factorization : Factorization, optional

    Returns
    -------
    ConditionReport
    """
    if factorization is None:
        factorization = factorize_problem(problem, cap)
    if solution is None:
        solution = solve_pgcs(problem, factorization)
    if tolerances is None:
        tolerances = default_tolerances(problem)

    z = pack_solution(solution)
    z_fro = float(np.linalg.norm(z))
    N = problem.order

    # W^{-1} H2 assembled from the slabs; H1 = H2 diag(tolerances)
    J2 = np.zeros((N, problem.data_length))
    tol_cols = np.zeros(problem.data_length)
    tol = tolerances.as_array()
    col = 0
    for i, (rows, cols, M) in enumerate(_h2_slabs(problem, solution)):
        k, j = divmod(i, len(BLOCKS))
        w = cols.shape[1]
        slab = np.zeros((N, w))
        slab[rows] = cols
        J2[:, col:col + w] = factorization.solve(slab)
        tol_cols[col:col + w] = tol[k, j]
        col += w
    t = pack_data_vector(problem)

    norm_J2 = spectral_norm_dense(J2, cap)
    norm_J1 = spectral_norm_dense(J2 * tol_cols, cap)
    norm_Winv = spectral_norm_dense(factorization.inverse(), cap)

    omega = omega_vector(problem, solution, factorization)
    mixed = float(np.max(omega) / np.max(np.abs(z)))
    comp = float(np.max(np.abs(entrywise_divide(omega, z))))
    mixed_upper, comp_upper = condition_upper_bounds(problem, solution, factorization)
    return ConditionReport(
        k_N1=norm_J1 / z_fro,
        k_N2=norm_J2 * float(np.linalg.norm(t)) / z_fro,
        k_E=norm_Winv * float(np.linalg.norm(pack_rhs(problem))) / z_fro,
        mixed=mixed,
        componentwise=comp,
        mixed_upper=mixed_upper,
        componentwise_upper=comp_upper,
        tolerances=tolerances,
        methods={name: "dense-exact" for name in ("k_N1", "k_N2", "k_E", "mixed",
                                                  "componentwise")},
    )
