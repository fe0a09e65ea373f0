"""Probabilistic and statistical condition estimation.

:func:`pce_spectral_norm` brackets ``||M||_2`` using Golub-Kahan-Lanczos
bidiagonalization from a random unit start vector ``v_1``. The largest
singular value ``alpha`` of the projected bidiagonal matrix is a certified
lower bound. For the upper bound, note that the next Lanczos vector is
``v_{k+1} = p_k(M^T M) v_1`` with::

    p_k(x) = prod_i (x - theta_i^2) / prod_j (a_j b_j)

(``theta_i`` the Ritz singular values, ``a_j, b_j`` the bidiagonal
entries). Since ``||v_{k+1}|| = 1``, ``|gamma_1| |p_k(sigma_max^2)| <= 1``
where ``gamma_1`` is the component of ``v_1`` along the top right singular
vector. For ``v_1`` uniform on the sphere in ``R^N``, ``gamma_1^2`` follows
``Beta(1/2, (N-1)/2)``, so ``|gamma_1| >= c_eps`` with probability
``1 - eps``; ``beta`` is then the largest root of ``p_k(x) = 1/c_eps``.

:func:`sce_condition_numbers` is the small-sample statistical estimate of
the mixed and componentwise condition numbers.
"""

from dataclasses import dataclass
from math import gamma as _gamma_fn
from math import pi, sqrt

import numpy as np
import scipy.linalg as sla
from scipy.optimize import brentq
from scipy.sparse.linalg import aslinearoperator
from scipy.special import betaincinv

from .assembly import build_scaled_operator, pack_data_vector, pack_solution
from .conditioning import entrywise_divide
from .errors import DimensionError, NumericalError
from .model import default_tolerances
from .solver import factorize_problem, inverse_product, solve_pgcs

__all__ = [
    "make_rng",
    "wallis",
    "PceResult",
    "pce_spectral_norm",
    "PceConditionResult",
    "pce_condition_numbers",
    "SceResult",
    "orthonormalize",
    "sce_condition_numbers",
    "sce_from_directions",
]


def make_rng(seed, *stream):
    """Seeded generator on the counter-based Philox bit generator.

    Extra integers select independent streams, e.g. ``make_rng(seed, trial)``.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = [0 if seed is None else int(seed)] + [int(s) for s in stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def wallis(p, mode="exact"):
    """Wallis factor ``omega_p = E|g^T z|/||g||_2`` for ``z`` uniform on ``S^{p-1}``.

    ``mode='exact'`` uses the odd/even product formula, ``mode='approx'`` the
    asymptotic form ``sqrt(2 / (pi (p - 1/2)))``.
    """
    p = int(p)
    if p < 1:
        raise ValueError("Wallis factor needs p >= 1")
    if mode == "approx":
        return sqrt(2.0 / (pi * (p - 0.5)))
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if p == 1:
        return 1.0
    if p == 2:
        return 2.0 / pi
    if p % 2:
        # 1*3*...*(p-2) / (2*4*...*(p-1))
        val = 1.0
        for j in range(1, (p - 1) // 2 + 1):
            val *= (2 * j - 1) / (2 * j)
        return val
    # (2/pi) * 2*4*...*(p-2) / (3*5*...*(p-1))
    val = 2.0 / pi
    for j in range(1, (p - 2) // 2 + 1):
        val *= (2 * j) / (2 * j + 1)
    return val


def _wallis_gamma(p):
    # closed form, used as a cross-check in tests
    return _gamma_fn(p / 2) / (sqrt(pi) * _gamma_fn((p + 1) / 2))


@dataclass(frozen=True)
class PceResult:
    alpha: float
    beta: float
    estimate: float
    eps_prob: float
    delta_gap: float
    iterations: int
    converged: bool


def _start_threshold(N, eps_prob):
    """``c`` with ``P(|gamma_1| < c) = eps_prob`` for a uniform unit vector in ``R^N``."""
    if N <= 1:
        return 1.0
    return sqrt(float(betaincinv(0.5, 0.5 * (N - 1), eps_prob)))


def _upper_bound(theta2, log_scale, log_target):
    """Largest ``x`` with ``sum log(x - theta2) - log_scale = log_target``."""
    top = float(theta2.max())

    def f(x):
        return float(np.sum(np.log(x - theta2)) - log_scale - log_target)

    step = top
    hi = top + step
    while f(hi) < 0:
        step *= 2.0
        hi = top + step
    # f -> -inf as x -> top from above, so the root is bracketed
    return brentq(f, np.nextafter(top, np.inf), hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps)


def pce_spectral_norm(op, eps_prob=1e-3, delta_gap=1e-2, seed=None, max_iter=None):
    """Probabilistic bracket ``[alpha, beta]`` for the spectral norm of `op`.

    Parameters
    ----------
    op : array_like or LinearOperator
        Needs ``matvec`` and ``rmatvec``.
    eps_prob : float
        ``beta`` fails to bound the norm with probability at most this.
    delta_gap : float
        Iterate until ``beta / alpha <= 1 + delta_gap``.
    seed : int or Generator, optional
    max_iter : int, optional
        Defaults to ``min(op.shape)`` (Krylov exhaustion).

    Returns
    -------
    PceResult
    """
    if not (0 < eps_prob < 1 and 0 < delta_gap < 1):
        raise ValueError("eps_prob and delta_gap must lie in (0, 1)")
    A = aslinearoperator(op)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        raise DimensionError("operator has an empty dimension")
    rng = make_rng(seed)
    # a wide operator can take one step beyond its rank before breakdown
    exhaust = min(rows, cols) + 1
    limit = exhaust if max_iter is None else min(int(max_iter), exhaust)

    v = rng.standard_normal(cols)
    v /= np.linalg.norm(v)
    log_target = -np.log(_start_threshold(cols, eps_prob))

    V = np.zeros((cols, limit + 1))
    U = np.zeros((rows, limit + 1))
    V[:, 0] = v
    a_vals, b_vals = [], []
    alpha = beta = 0.0
    log_scale = 0.0
    u_prev = None
    for k in range(limit):
        u = A.matvec(V[:, k])
        if u_prev is not None:
            u = u - b_vals[-1] * u_prev
        # full reorthogonalization, applied twice
        for _ in range(2):
            u -= U[:, :k] @ (U[:, :k].T @ u)
        a = float(np.linalg.norm(u))
        scale = max(alpha, a, np.finfo(float).tiny)
        if a <= 1e-13 * scale:
            # span(v_1..v_k) is invariant under M^T M; the Ritz values of
            # the k-1 x k bidiagonal are exact singular values
            if k:
                Bt = np.zeros((k, k + 1))
                Bt[:, :k] = np.diag(a_vals) + np.diag(b_vals[:-1], 1)
                Bt[k - 1, k] = b_vals[-1]
                alpha = float(sla.svdvals(Bt)[0])
            return PceResult(alpha, alpha, alpha, eps_prob, delta_gap, k + 1, True)
        u /= a
        U[:, k] = u
        a_vals.append(a)

        w = A.rmatvec(u) - a * V[:, k]
        for _ in range(2):
            w -= V[:, :k + 1] @ (V[:, :k + 1].T @ w)
        b = float(np.linalg.norm(w))

        Bk = np.diag(a_vals) + np.diag(b_vals, 1)
        theta = sla.svdvals(Bk)
        alpha = float(theta[0])
        if b <= 1e-13 * alpha:
            return PceResult(alpha, alpha, alpha, eps_prob, delta_gap, k + 1, True)

        log_scale += np.log(a) + np.log(b)
        x = _upper_bound(theta ** 2, log_scale, log_target)
        beta = max(sqrt(x), alpha)
        b_vals.append(b)
        V[:, k + 1] = w / b
        u_prev = u
        if beta <= (1.0 + delta_gap) * alpha:
            return PceResult(alpha, beta, 0.5 * (alpha + beta), eps_prob, delta_gap,
                             k + 1, True)
    return PceResult(alpha, beta, 0.5 * (alpha + beta), eps_prob, delta_gap, limit, False)


@dataclass(frozen=True)
class PceConditionResult:
    k_N1: float
    k_E: float
    sensitivity: PceResult
    inverse: PceResult


def pce_condition_numbers(problem, solution=None, tolerances=None, eps_prob=1e-3,
                          delta_gap=1e-2, seed=None, factorization=None):
    """Estimate ``k_N1`` and ``k_E`` from PCE brackets of ``W^{-1} H1`` and ``W^{-1}``.

    Both estimates use the bracket midpoint ``(alpha + beta) / 2``.
    """
    if factorization is None:
        factorization = factorize_problem(problem)
    if solution is None:
        solution = solve_pgcs(problem, factorization)
    if tolerances is None:
        tolerances = default_tolerances(problem)
    rng = make_rng(seed)
    H1 = build_scaled_operator(problem, solution, tolerances, "implicit")
    sens = pce_spectral_norm(inverse_product(factorization, H1), eps_prob, delta_gap, rng)
    N = problem.order
    inv = pce_spectral_norm(inverse_product(factorization, np.eye(N)), eps_prob, delta_gap, rng)
    z_fro = solution.frobenius_norm()
    return PceConditionResult(
        k_N1=sens.estimate / z_fro,
        k_E=inv.estimate * problem.rhs_norm() / z_fro,
        sensitivity=sens,
        inverse=inv,
    )


@dataclass(frozen=True)
class SceResult:
    mixed_est: float
    componentwise_est: float
    samples: int
    kappa_abs: np.ndarray
    seed: object


def orthonormalize(G, tol=1e-10):
    """Modified Gram-Schmidt with one reorthogonalization pass.

    Returns
    -------
    Q : ndarray
        Orthonormal columns spanning ``range(G)``.
    rank_ok : bool
        False when a column collapsed below ``tol`` relative to its norm.
    """
    Q = np.array(G, dtype=float, copy=True)
    s = Q.shape[1]
    for j in range(s):
        orig = np.linalg.norm(Q[:, j])
        for _ in range(2):
            for i in range(j):
                Q[:, j] -= (Q[:, i] @ Q[:, j]) * Q[:, i]
        nrm = np.linalg.norm(Q[:, j])
        if orig == 0 or nrm <= tol * orig:
            return Q, False
        Q[:, j] /= nrm
    return Q, True


def sce_from_directions(problem, solution, directions, factorization, wallis_mode="approx"):
    """Steps 2-4 of the statistical estimate for given orthonormal directions.

    `directions` is ``q x s``; column ``j`` stacks the direction bundle
    ``(R_kj, L_kj, M_kj, S_kj, N_kj, Q_kj)`` in canonical data order.
    """
    q = problem.data_length
    directions = np.asarray(directions, dtype=float)
    if directions.ndim != 2 or directions.shape[0] != q:
        raise DimensionError(f"directions must have {q} rows")
    s = directions.shape[1]
    t = pack_data_vector(problem)
    H2 = build_scaled_operator(problem, solution, None, "implicit")
    scaled = directions * t[:, None]
    # right-hand sides M - (R X - Y L), Q - (S X_{k+1} - Y N) are -H2 d_j
    U = factorization.solve(-H2.matmat(scaled))
    ratio = wallis(s, wallis_mode) / wallis(q, wallis_mode)
    kappa = ratio * np.sqrt(np.sum(U ** 2, axis=1))
    z = pack_solution(solution)
    mixed = float(np.max(kappa) / np.max(np.abs(z)))
    comp = float(np.max(np.abs(entrywise_divide(kappa, z))))
    return mixed, comp, kappa


def sce_condition_numbers(problem, solution=None, s=3, seed=None, factorization=None,
                          wallis_mode="approx", max_resample=3):
    """Small-sample statistical estimate of the mixed and componentwise numbers.

    Parameters
    ----------
    problem : PgcsProblem
    solution : PgcsSolution, optional
    s : int
        Number of samples, ``1 <= s <= q``.
    seed : int or Generator, optional
    factorization : Factorization, optional
        Reused for the ``s`` solves.
    wallis_mode : {'approx', 'exact'}

    Returns
    -------
    SceResult
    """
    if factorization is None:
        factorization = factorize_problem(problem)
    if solution is None:
        solution = solve_pgcs(problem, factorization)
    q = problem.data_length
    if not 1 <= s <= q:
        raise ValueError(f"sample count must satisfy 1 <= s <= {q}")
    rng = make_rng(seed)
    for _ in range(max_resample + 1):
        P, ok = orthonormalize(rng.standard_normal((q, s)))
        if ok:
            break
    else:
        raise NumericalError("random directions stayed rank deficient after resampling")
    mixed, comp, kappa = sce_from_directions(problem, solution, P, factorization, wallis_mode)
    return SceResult(mixed, comp, s, kappa, seed)
