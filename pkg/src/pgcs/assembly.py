"""Structured matrices of the matrix-vector form.

``W`` is the ``2mnp x 2mnp`` coefficient matrix of ``W z = g`` with
``z = vec([X_1, Y_1, ..., X_p, Y_p])`` and ``g = vec([E_1, F_1, ..., E_p,
F_p])``. Block row ``2k`` holds the ``A``-equation of period ``k`` and block
row ``2k + 1`` the ``C``-equation; the ``C_p`` block wraps around to the
``X_1`` column.

The scaled data operator maps the tolerance-scaled data vector ``u`` (blocks
``A, B, E, C, D, F`` per period) to the first-order change in the equations::

    period k:  alpha_k (X_k^T kron I)   -beta_k (I kron Y_k)  -gamma_k I   0 ...
               ... zeta_k (X_{k+1}^T kron I)  -tau_k (I kron Y_k)  -delta_k I

Built from an approximate solution it is ``Hhat``; from the exact solution
``H1``; with unit tolerances ``H2``.

Every builder has an ``explicit`` mode (dense ndarray, size capped) and an
``implicit`` mode returning a :class:`scipy.sparse.linalg.LinearOperator`
with ``matvec`` and ``rmatvec`` built from :func:`~pgcs.kron.apply_sandwich`.
"""

import os

import numpy as np
from scipy.sparse.linalg import LinearOperator

from .errors import DataError, DimensionError, SizeCapError
from .kron import apply_sandwich, kronecker, unvectorize, vectorize
from .model import BLOCKS, PerturbationSet, PgcsSolution, ToleranceSet

__all__ = [
    "DEFAULT_DENSE_CAP",
    "dense_cap",
    "build_W",
    "build_delta_W",
    "build_scaled_operator",
    "scaled_operator_block",
    "pack_data_vector",
    "pack_perturbation_vector",
    "unpack_perturbation_vector",
    "pack_rhs",
    "pack_solution",
    "unpack_solution",
]

DEFAULT_DENSE_CAP = 4000


def dense_cap(cap=None):
    """Largest order allowed for explicit matrices.

    Uses `cap` when given, otherwise ``$PGCS_DENSE_CAP``, otherwise 4000.
    """
    if cap is not None:
        return int(cap)
    env = os.environ.get("PGCS_DENSE_CAP")
    if not env:
        return DEFAULT_DENSE_CAP
    try:
        return int(env)
    except ValueError:
        raise DataError(f"PGCS_DENSE_CAP must be an integer, got {env!r}") from None


def _guard(order, cap, what):
    limit = dense_cap(cap)
    if order > limit:
        raise SizeCapError(f"explicit {what} of order {order} exceeds cap {limit}")


def _block_sizes(m, n):
    # column widths of one period of the data vector, canonical order
    return (m * m, n * n, m * n, m * m, n * n, m * n)


def _check_mode(mode):
    if mode not in ("explicit", "implicit"):
        raise ValueError(f"mode must be 'explicit' or 'implicit', got {mode!r}")


def pack_rhs(problem):
    """``g = vec([E_1, F_1, ..., E_p, F_p])``."""
    return np.concatenate([np.concatenate([vectorize(E), vectorize(F)])
                           for E, F in zip(problem.E, problem.F)])


def pack_solution(solution):
    """``z = vec([X_1, Y_1, ..., X_p, Y_p])``."""
    return np.concatenate([np.concatenate([vectorize(X), vectorize(Y)])
                           for X, Y in zip(solution.X, solution.Y)])


def unpack_solution(z, p, m, n):
    """Inverse of :func:`pack_solution`."""
    z = np.asarray(z, dtype=float)
    mn = m * n
    if z.shape != (2 * mn * p,):
        raise DimensionError(f"solution vector has shape {z.shape}, expected ({2 * mn * p},)")
    X = tuple(unvectorize(z[2 * k * mn:(2 * k + 1) * mn], m, n) for k in range(p))
    Y = tuple(unvectorize(z[(2 * k + 1) * mn:(2 * k + 2) * mn], m, n) for k in range(p))
    return PgcsSolution(X, Y)


def _coupling_operator(A, B, C, D, p, m, n, mode, cap):
    """Shared builder for W and dW (same structure, different data)."""
    _check_mode(mode)
    mn = m * n
    N = 2 * mn * p
    Im, In = np.eye(m), np.eye(n)

    if mode == "explicit":
        _guard(N, cap, "W")
        W = np.zeros((N, N))
        for k in range(p):
            ra, rc = 2 * k * mn, (2 * k + 1) * mn
            cx, cy = 2 * k * mn, (2 * k + 1) * mn
            cx_next = 2 * ((k + 1) % p) * mn
            W[ra:ra + mn, cx:cx + mn] += kronecker(In, A[k])
            W[ra:ra + mn, cy:cy + mn] -= kronecker(B[k].T, Im)
            W[rc:rc + mn, cy:cy + mn] -= kronecker(D[k].T, Im)
            # += so the p = 1 case (X_2 = X_1) accumulates correctly
            W[rc:rc + mn, cx_next:cx_next + mn] += kronecker(In, C[k])
        return W

    def matvec(z):
        z = np.ravel(z)
        out = np.empty(N)
        for k in range(p):
            x = z[2 * k * mn:(2 * k + 1) * mn]
            y = z[(2 * k + 1) * mn:(2 * k + 2) * mn]
            x_next = z[2 * ((k + 1) % p) * mn:(2 * ((k + 1) % p) + 1) * mn]
            out[2 * k * mn:(2 * k + 1) * mn] = (apply_sandwich(A[k], In, x)
                                                - apply_sandwich(Im, B[k], y))
            out[(2 * k + 1) * mn:(2 * k + 2) * mn] = (apply_sandwich(C[k], In, x_next)
                                                      - apply_sandwich(Im, D[k], y))
        return out

    def rmatvec(w):
        w = np.ravel(w)
        out = np.zeros(N)
        for k in range(p):
            a = w[2 * k * mn:(2 * k + 1) * mn]
            c = w[(2 * k + 1) * mn:(2 * k + 2) * mn]
            j = (k + 1) % p
            out[2 * k * mn:(2 * k + 1) * mn] += apply_sandwich(A[k].T, In, a)
            out[(2 * k + 1) * mn:(2 * k + 2) * mn] -= (apply_sandwich(Im, B[k].T, a)
                                                       + apply_sandwich(Im, D[k].T, c))
            out[2 * j * mn:(2 * j + 1) * mn] += apply_sandwich(C[k].T, In, c)
        return out

    return LinearOperator((N, N), matvec=matvec, rmatvec=rmatvec, dtype=float)


def build_W(problem, mode="explicit", cap=None):
    """Coefficient matrix ``W`` of the matrix-vector form."""
    return _coupling_operator(problem.A, problem.B, problem.C, problem.D,
                              problem.p, problem.m, problem.n, mode, cap)


def build_delta_W(delta, m, n, mode="explicit", cap=None):
    """``dW``: same structure as ``W`` with ``dA, dB, dC, dD`` substituted."""
    return _coupling_operator(delta.dA, delta.dB, delta.dC, delta.dD,
                              delta.p, m, n, mode, cap)


def build_scaled_operator(problem, solution, tolerances=None, mode="explicit", cap=None):
    """Scaled data operator (``Hhat``, ``H1`` or ``H2``).

    Parameters
    ----------
    problem : PgcsProblem
        Supplies the dimensions only.
    solution : PgcsSolution
        Exact solution (gives ``H1``) or a candidate (gives ``Hhat``).
    tolerances : ToleranceSet, optional
        Defaults to unit tolerances, which yields ``H2``.
    mode : {'explicit', 'implicit'}

    Returns
    -------
    ndarray or LinearOperator of shape ``(2mnp, q)``
    """
    _check_mode(mode)
    p, m, n = problem.p, problem.m, problem.n
    if tolerances is None:
        tolerances = ToleranceSet.unit(p)
    if tolerances.p != p or solution.p != p:
        raise DimensionError("tolerances/solution period does not match the problem")
    tol = tolerances.as_array()
    mn = m * n
    N = 2 * mn * p
    sizes = _block_sizes(m, n)
    per = sum(sizes)
    q = per * p
    Im, In = np.eye(m), np.eye(n)
    offs = np.concatenate([[0], np.cumsum(sizes)])

    if mode == "explicit":
        _guard(N, cap, "scaled data operator")
        H = np.zeros((N, q))
        for k in range(p):
            H[2 * k * mn:(2 * k + 2) * mn, k * per:(k + 1) * per] = \
                scaled_operator_block(solution, tolerances, k, m, n)
        return H

    def matvec(u):
        u = np.ravel(u)
        out = np.empty(N)
        for k in range(p):
            X, Y, Xn = solution.X[k], solution.Y[k], solution.x_next(k)
            seg = [u[k * per + offs[j]:k * per + offs[j + 1]] for j in range(6)]
            out[2 * k * mn:(2 * k + 1) * mn] = (
                tol[k, 0] * apply_sandwich(Im, X, seg[0])
                - tol[k, 1] * apply_sandwich(Y, In, seg[1])
                - tol[k, 2] * seg[2])
            out[(2 * k + 1) * mn:(2 * k + 2) * mn] = (
                tol[k, 3] * apply_sandwich(Im, Xn, seg[3])
                - tol[k, 4] * apply_sandwich(Y, In, seg[4])
                - tol[k, 5] * seg[5])
        return out

    def rmatvec(w):
        w = np.ravel(w)
        out = np.empty(q)
        for k in range(p):
            X, Y, Xn = solution.X[k], solution.Y[k], solution.x_next(k)
            a = w[2 * k * mn:(2 * k + 1) * mn]
            c = w[(2 * k + 1) * mn:(2 * k + 2) * mn]
            parts = (
                tol[k, 0] * apply_sandwich(Im, X.T, a),
                -tol[k, 1] * apply_sandwich(Y.T, In, a),
                -tol[k, 2] * a,
                tol[k, 3] * apply_sandwich(Im, Xn.T, c),
                -tol[k, 4] * apply_sandwich(Y.T, In, c),
                -tol[k, 5] * c,
            )
            out[k * per:(k + 1) * per] = np.concatenate(parts)
        return out

    return LinearOperator((N, q), matvec=matvec, rmatvec=rmatvec, dtype=float)


def scaled_operator_block(solution, tolerances, k, m, n):
    """Dense diagonal block of period `k` (``2mn x 2(m^2 + n^2 + mn)``)."""
    tol = tolerances.as_array()[k]
    X, Y, Xn = solution.X[k], solution.Y[k], solution.x_next(k)
    mn = m * n
    Im, In = np.eye(m), np.eye(n)
    top = np.hstack([tol[0] * kronecker(X.T, Im), -tol[1] * kronecker(In, Y),
                     -tol[2] * np.eye(mn)])
    bottom = np.hstack([tol[3] * kronecker(Xn.T, Im), -tol[4] * kronecker(In, Y),
                        -tol[5] * np.eye(mn)])
    zt, zb = np.zeros((mn, bottom.shape[1])), np.zeros((mn, top.shape[1]))
    return np.block([[top, zt], [zb, bottom]])


def pack_data_vector(problem):
    """Stacked data vector ``t``: ``vec(A_1), vec(B_1), vec(E_1), vec(C_1), ...``."""
    return np.concatenate([vectorize(M) for k in range(problem.p)
                           for M in problem.blocks(k)])


def pack_perturbation_vector(delta, tolerances):
    """Tolerance-scaled perturbation vector ``u`` (blocks divided by tolerances)."""
    if tolerances.p != delta.p:
        raise DimensionError("tolerances and perturbation differ in period")
    tol = tolerances.as_array()
    return np.concatenate([vectorize(M) / tol[k, j] for k in range(delta.p)
                           for j, M in enumerate(delta.blocks(k))])


def unpack_perturbation_vector(u, tolerances, p, m, n):
    """Inverse of :func:`pack_perturbation_vector` (multiplies tolerances back)."""
    u = np.asarray(u, dtype=float)
    sizes = _block_sizes(m, n)
    per = sum(sizes)
    if u.shape != (per * p,):
        raise DimensionError(f"data vector has shape {u.shape}, expected ({per * p},)")
    tol = tolerances.as_array()
    shapes = ((m, m), (n, n), (m, n), (m, m), (n, n), (m, n))
    out = {name: [] for name in BLOCKS}
    pos = 0
    for k in range(p):
        for j, name in enumerate(BLOCKS):
            seg = u[pos:pos + sizes[j]]
            out[name].append(tol[k, j] * unvectorize(seg, *shapes[j]))
            pos += sizes[j]
    return PerturbationSet(out["A"], out["B"], out["C"], out["D"], out["E"], out["F"])
