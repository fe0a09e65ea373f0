"""Dense direct solves and norm oracles."""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from .assembly import build_W, dense_cap, pack_rhs, unpack_solution
from .errors import NonConvergenceError, RankDeficientError, SingularSystemError, SizeCapError
from .model import check

__all__ = [
    "Factorization",
    "factorize",
    "factorize_problem",
    "solve_pgcs",
    "inverse_product",
    "min_norm_ls_solve",
    "spectral_norm_dense",
    "PerronResult",
    "spectral_radius_nonneg",
]


class Factorization:
    """LU factorization with partial pivoting of a square matrix.

    Raises :class:`SingularSystemError` at construction when a pivot is below
    ``eps * ||W||_inf * order``.
    """

    def __init__(self, W):
        W = np.asarray(W, dtype=float)
        if W.ndim != 2 or W.shape[0] != W.shape[1]:
            raise ValueError("Factorization needs a square matrix")
        self.order = W.shape[0]
        self.norm_inf = float(np.max(np.sum(np.abs(W), axis=1))) if W.size else 0.0
        with warnings.catch_warnings():
            # exact zero pivots are reported below as SingularSystemError
            warnings.simplefilter("ignore", sla.LinAlgWarning)
            self._lu = sla.lu_factor(W, check_finite=True)
        pivots = np.abs(np.diag(self._lu[0]))
        threshold = np.finfo(float).eps * self.norm_inf * self.order
        self.min_pivot = float(pivots.min())
        if self.norm_inf == 0.0 or self.min_pivot <= threshold:
            raise SingularSystemError(
                f"W is numerically singular (min pivot {self.min_pivot:.3e} "
                f"<= {threshold:.3e}); the PGCS equation has no unique solution")

    def solve(self, b, trans=False):
        """Solve ``W x = b`` (or ``W^T x = b`` with ``trans=True``); `b` may be 2-D."""
        return sla.lu_solve(self._lu, b, trans=1 if trans else 0)

    def inverse(self):
        return self.solve(np.eye(self.order))


def factorize(W):
    return Factorization(W)


def factorize_problem(problem, cap=None):
    """Validate `problem`, assemble the explicit ``W`` and factorize it."""
    check(problem)
    return Factorization(build_W(problem, "explicit", cap))


def solve_pgcs(problem, factorization=None, cap=None):
    """Solve the PGCS equation through its matrix-vector form.

    Parameters
    ----------
    problem : PgcsProblem
    factorization : Factorization, optional
        Reused if given; otherwise ``W`` is assembled and factorized.
    cap : int, optional
        Explicit-size cap on ``2mnp``.

    Returns
    -------
    PgcsSolution
    """
    if factorization is None:
        factorization = factorize_problem(problem, cap)
    z = factorization.solve(pack_rhs(problem))
    return unpack_solution(z, problem.p, problem.m, problem.n)


def inverse_product(factorization, op):
    """Implicit ``W^{-1} op`` with matvec and rmatvec through the LU factors."""
    op = aslinearoperator(op)
    return LinearOperator(
        op.shape,
        matvec=lambda x: factorization.solve(op.matvec(np.ravel(x))),
        rmatvec=lambda y: op.rmatvec(factorization.solve(np.ravel(y), trans=True)),
        dtype=float,
    )


def _as_dense(op):
    if isinstance(op, LinearOperator):
        return op.matmat(np.eye(op.shape[1]))
    return np.asarray(op, dtype=float)


def min_norm_ls_solve(op, r, rtol=None):
    """Minimum Euclidean norm solution of the underdetermined system ``op u = r``.

    Uses a QR factorization of ``op^T``. When the triangular factor shows
    rank loss the SVD-based pseudo-inverse solution is computed and returned
    attached to a :class:`RankDeficientError`.
    """
    H = _as_dense(op)
    r = np.asarray(r, dtype=float)
    rows, cols = H.shape
    if r.shape != (rows,):
        raise ValueError(f"right-hand side has shape {r.shape}, expected ({rows},)")
    if not np.any(r):
        return np.zeros(cols)
    if rows > cols:
        raise RankDeficientError(f"operator with {rows} rows and {cols} columns "
                                 "cannot have full row rank")
    if rtol is None:
        rtol = max(rows, cols) * np.finfo(float).eps
    Q, R = sla.qr(H.T, mode="economic")
    diag = np.abs(np.diag(R))
    if diag.size and diag.min() > rtol * diag.max():
        y = sla.solve_triangular(R, r, trans="T")
        return Q @ y
    u, _, rank, _ = sla.lstsq(H, r, cond=rtol, lapack_driver="gelsd")
    raise RankDeficientError(f"numerical rank {rank} < {rows}", solution=u, rank=rank)


def spectral_norm_dense(M, cap=None):
    """Largest singular value of an explicit matrix (full SVD)."""
    M = _as_dense(M)
    if min(M.shape) > dense_cap(cap):
        raise SizeCapError(f"dense SVD of a {M.shape[0]}x{M.shape[1]} matrix exceeds cap")
    if M.size == 0:
        return 0.0
    return float(sla.svdvals(M, check_finite=True)[0])


@dataclass(frozen=True)
class PerronResult:
    value: float
    converged: bool
    iterations: int


def spectral_radius_nonneg(M, rtol=1e-8, max_iter=10_000, restarts=3, seed=0, raise_on_failure=False):
    """Perron root of an explicit entrywise-nonnegative matrix by power iteration.

    Starts from the all-ones vector. When every iterate is positive the
    Collatz-Wielandt quotients ``min (Mx)_i / x_i <= rho <= max (Mx)_i / x_i``
    give the stopping test; otherwise successive norm ratios are compared.
    Up to `restarts` random positive starts are tried before giving up.

    Returns
    -------
    PerronResult
        ``converged=False`` marks an unreliable estimate.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("spectral_radius_nonneg needs a square matrix")
    if np.any(M < 0):
        raise ValueError("matrix has negative entries")
    N = M.shape[0]
    if N == 0 or not np.any(M):
        return PerronResult(0.0, True, 0)

    rng = np.random.default_rng(seed)
    starts = [np.ones(N)] + [rng.uniform(0.5, 1.5, N) for _ in range(restarts)]
    best = 0.0
    total = 0
    for x in starts:
        x = x / x.sum()
        prev = None
        for it in range(1, max_iter + 1):
            y = M @ x
            s = y.sum()
            total += 1
            if s == 0.0:
                # x lies in a nilpotent part; this start carries no information
                break
            if np.all(x > 0):
                ratios = y / x
                lo, hi = ratios.min(), ratios.max()
                if hi - lo <= rtol * hi:
                    return PerronResult(float(0.5 * (lo + hi)), True, total)
            if prev is not None and abs(s - prev) <= rtol * s:
                return PerronResult(float(s), True, total)
            prev = s
            x = y / s
        best = max(best, prev or 0.0)
    if raise_on_failure:
        raise NonConvergenceError(f"power iteration did not converge in {total} steps")
    return PerronResult(float(best), False, total)
