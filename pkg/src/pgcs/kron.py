"""Column-major vectorization and Kronecker-structured products.

Everything here works on plain ``numpy`` arrays. ``vec`` stacks columns, so
``vec(A X C) = (C^T kron A) vec(X)``; :func:`apply_sandwich` evaluates the
right-hand side without ever forming the Kronecker product.
"""

import numpy as np

from .errors import DimensionError

__all__ = ["vectorize", "unvectorize", "kronecker", "apply_sandwich"]


def vectorize(M):
    """Stack the columns of `M` into a 1-D array."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={M.ndim}")
    return M.reshape(-1, order="F")


def unvectorize(v, rows, cols):
    """Inverse of :func:`vectorize` for a ``rows x cols`` matrix."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size != rows * cols:
        raise DimensionError(
            f"vector of length {v.size} cannot be reshaped to {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def kronecker(A, B):
    """Explicit Kronecker product; block ``(i, j)`` equals ``A[i, j] * B``.

    Only meant for small instances and test oracles.
    """
    return np.kron(np.asarray(A, dtype=float), np.asarray(B, dtype=float))


def apply_sandwich(A, C, x):
    """Return ``vec(A @ X @ C)`` where ``X`` is `x` reshaped column-major.

    Equivalent to ``kronecker(C.T, A) @ x``.

    Parameters
    ----------
    A : (r, a) array_like
    C : (c, s) array_like
    x : (a*c,) array_like

    Returns
    -------
    (r*s,) ndarray
    """
    A = np.asarray(A, dtype=float)
    C = np.asarray(C, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != A.shape[1] * C.shape[0]:
        raise DimensionError(
            f"x has length {x.size}, expected {A.shape[1]}*{C.shape[0]}")
    X = x.reshape((A.shape[1], C.shape[0]), order="F")
    return (A @ X @ C).reshape(-1, order="F")
