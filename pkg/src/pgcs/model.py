"""Problem data, candidate solutions, perturbations and residuals.

The periodic generalized coupled Sylvester (PGCS) equation with period ``p``
reads, for ``k = 1, ..., p``::

    A_k X_k     - Y_k B_k = E_k
    C_k X_{k+1} - Y_k D_k = F_k        with X_{p+1} = X_1

``A_k, C_k`` are ``m x m``, ``B_k, D_k`` are ``n x n`` and ``E_k, F_k, X_k,
Y_k`` are ``m x n``. In code the period index is 0-based; the cyclic
successor of ``X[p-1]`` is ``X[0]`` and is always obtained through
:meth:`PgcsSolution.x_next`, never by storing a copy. Diagnostics name
matrices with the 1-based period index (``A[2]`` is ``A_2``).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionError

__all__ = [
    "BLOCKS",
    "TOLERANCE_NAMES",
    "PgcsProblem",
    "PgcsSolution",
    "ToleranceSet",
    "PerturbationSet",
    "ResidualSet",
    "validate",
    "check",
    "residual",
    "default_tolerances",
    "apply_perturbation",
]

# canonical per-period ordering of the data blocks and their tolerances
BLOCKS = ("A", "B", "E", "C", "D", "F")
TOLERANCE_NAMES = ("alpha", "beta", "gamma", "zeta", "tau", "delta")


def _as_mats(seq):
    return tuple(np.array(M, dtype=float, ndmin=2) for M in seq)


def _block_shape(name, m, n):
    if name in ("A", "C"):
        return (m, m)
    if name in ("B", "D"):
        return (n, n)
    return (m, n)


@dataclass(frozen=True)
class PgcsProblem:
    """Coefficient matrices of a PGCS equation.

    Construction does not validate; call :func:`validate` or :func:`check`.
    """

    p: int
    m: int
    n: int
    A: tuple
    B: tuple
    C: tuple
    D: tuple
    E: tuple
    F: tuple

    def __post_init__(self):
        for name in BLOCKS:
            object.__setattr__(self, name, _as_mats(getattr(self, name)))

    @classmethod
    def from_matrices(cls, A, B, C, D, E, F):
        """Build a problem, inferring ``p, m, n`` from ``A`` and ``B``."""
        A = _as_mats(A)
        B = _as_mats(B)
        if not A or not B:
            raise DataError("at least one period is required")
        return cls(len(A), A[0].shape[0], B[0].shape[0], A, B, C, D, E, F)

    def blocks(self, k):
        """The six matrices of period `k` in canonical order (A, B, E, C, D, F)."""
        return tuple(getattr(self, name)[k] for name in BLOCKS)

    @property
    def order(self):
        """Order ``2mnp`` of the matrix-vector form."""
        return 2 * self.m * self.n * self.p

    @property
    def data_length(self):
        """Length ``q = 2p(m^2 + n^2 + mn)`` of the stacked data vector."""
        m, n = self.m, self.n
        return 2 * self.p * (m * m + n * n + m * n)

    def rhs_norm(self):
        """Frobenius norm of ``[E_1, F_1, ..., E_p, F_p]``."""
        return float(np.sqrt(sum(np.sum(M ** 2) for M in self.E + self.F)))

    def data_norm(self):
        """Frobenius norm of all ``6p`` coefficient matrices together."""
        return float(np.sqrt(sum(np.sum(getattr(self, b)[k] ** 2)
                                 for b in BLOCKS for k in range(self.p))))

    def max_abs(self):
        return max(float(np.max(np.abs(getattr(self, b)[k])))
                   for b in BLOCKS for k in range(self.p))


@dataclass(frozen=True)
class PgcsSolution:
    """The unknowns ``X_k, Y_k``; also used for approximate solutions."""

    X: tuple
    Y: tuple

    def __post_init__(self):
        object.__setattr__(self, "X", _as_mats(self.X))
        object.__setattr__(self, "Y", _as_mats(self.Y))
        if len(self.X) != len(self.Y):
            raise DimensionError("X and Y must have the same number of periods")

    @property
    def p(self):
        return len(self.X)

    def x_next(self, k):
        """``X_{k+1}`` with the cyclic identification ``X_{p+1} = X_1``."""
        return self.X[(k + 1) % len(self.X)]

    def frobenius_norm(self):
        """``||[X_1, Y_1, ..., X_p, Y_p]||_F``."""
        return float(np.sqrt(sum(np.sum(M ** 2) for M in self.X + self.Y)))

    def max_norm(self):
        """``||[X_1, Y_1, ..., X_p, Y_p]||_max`` (largest entry magnitude)."""
        return max(float(np.max(np.abs(M))) for M in self.X + self.Y)


@dataclass(frozen=True)
class ToleranceSet:
    """Weights ``alpha_k, beta_k, gamma_k, zeta_k, tau_k, delta_k``.

    They scale the perturbations of ``A_k, B_k, E_k, C_k, D_k, F_k`` in that
    order. All must be strictly positive and finite.
    """

    alpha: tuple
    beta: tuple
    gamma: tuple
    zeta: tuple
    tau: tuple
    delta: tuple

    def __post_init__(self):
        lengths = set()
        for name in TOLERANCE_NAMES:
            vals = tuple(float(v) for v in np.atleast_1d(getattr(self, name)))
            object.__setattr__(self, name, vals)
            lengths.add(len(vals))
            bad = [k + 1 for k, v in enumerate(vals)
                   if not (np.isfinite(v) and v > 0)]
            if bad:
                raise DataError(
                    f"tolerance {name} must be positive and finite "
                    f"(offending periods {bad})")
        if len(lengths) != 1:
            raise DimensionError("all tolerance families need p entries")

    @classmethod
    def unit(cls, p):
        """All tolerances equal to one."""
        return cls(*([(1.0,) * p] * 6))

    @classmethod
    def from_array(cls, arr):
        """From a ``(p, 6)`` array in canonical block order."""
        arr = np.asarray(arr, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 6:
            raise DimensionError("tolerance array must have shape (p, 6)")
        return cls(*(tuple(arr[:, j]) for j in range(6)))

    @property
    def p(self):
        return len(self.alpha)

    def as_array(self):
        """``(p, 6)`` array, columns in canonical block order."""
        return np.column_stack([getattr(self, name) for name in TOLERANCE_NAMES])

    def scaled(self, s):
        return ToleranceSet.from_array(self.as_array() * s)


@dataclass(frozen=True)
class PerturbationSet:
    """Perturbations ``dA_k, ..., dF_k`` of the coefficient matrices."""

    dA: tuple
    dB: tuple
    dC: tuple
    dD: tuple
    dE: tuple
    dF: tuple

    def __post_init__(self):
        for name in BLOCKS:
            object.__setattr__(self, "d" + name, _as_mats(getattr(self, "d" + name)))

    @classmethod
    def zeros(cls, problem):
        p, m, n = problem.p, problem.m, problem.n
        return cls(*[tuple(np.zeros(_block_shape(b, m, n)) for _ in range(p))
                     for b in ("A", "B", "C", "D", "E", "F")])

    @classmethod
    def from_problem(cls, problem):
        """Reinterpret a problem's coefficients as a perturbation."""
        return cls(problem.A, problem.B, problem.C, problem.D, problem.E, problem.F)

    @property
    def p(self):
        return len(self.dA)

    def blocks(self, k):
        return tuple(getattr(self, "d" + name)[k] for name in BLOCKS)

    def scaled(self, s):
        return PerturbationSet(*[tuple(s * M for M in getattr(self, "d" + b))
                                 for b in ("A", "B", "C", "D", "E", "F")])

    def rhs_norm(self):
        """Frobenius norm of ``[dE_1, dF_1, ..., dE_p, dF_p]``."""
        return float(np.sqrt(sum(np.sum(M ** 2) for M in self.dE + self.dF)))


@dataclass(frozen=True)
class ResidualSet:
    """``R1[k] = E_k - (A_k X_k - Y_k B_k)``, ``R2[k] = F_k - (C_k X_{k+1} - Y_k D_k)``."""

    R1: tuple
    R2: tuple

    def vector(self):
        """``vec([R_11, R_12, ..., R_p1, R_p2])``, ordered like the rows of W."""
        parts = []
        for R1, R2 in zip(self.R1, self.R2):
            parts.append(R1.reshape(-1, order="F"))
            parts.append(R2.reshape(-1, order="F"))
        return np.concatenate(parts)

    def max_abs(self):
        return max(float(np.max(np.abs(R))) for R in self.R1 + self.R2)


def validate(problem):
    """Check shapes and finiteness of every coefficient matrix.

    Returns
    -------
    list of str
        Human readable diagnostics; empty when the problem is well formed.
    """
    errors = []
    p, m, n = problem.p, problem.m, problem.n
    for label, val in (("p", p), ("m", m), ("n", n)):
        if not isinstance(val, (int, np.integer)) or val < 1:
            errors.append(f"{label} must be a positive integer, got {val!r}")
    if errors:
        return errors
    for name in BLOCKS:
        mats = getattr(problem, name)
        if len(mats) != p:
            errors.append(f"{name} has {len(mats)} matrices, expected p={p}")
            continue
        want = _block_shape(name, m, n)
        for k, M in enumerate(mats):
            if M.shape != want:
                errors.append(f"{name}[{k + 1}] has shape {M.shape[0]}x{M.shape[1]}, "
                              f"expected {want[0]}x{want[1]}")
            elif not np.all(np.isfinite(M)):
                errors.append(f"{name}[{k + 1}] has non-finite entries")
    return errors


def check(problem):
    """Raise :class:`DataError` listing every problem found by :func:`validate`."""
    errors = validate(problem)
    if errors:
        raise DataError("invalid PGCS problem: " + "; ".join(errors), errors)
    return problem


def _check_solution(problem, sol):
    if sol.p != problem.p:
        raise DimensionError(f"solution has {sol.p} periods, problem has {problem.p}")
    want = (problem.m, problem.n)
    for label, mats in (("X", sol.X), ("Y", sol.Y)):
        for k, M in enumerate(mats):
            if M.shape != want:
                raise DimensionError(f"{label}[{k + 1}] has shape {M.shape}, expected {want}")


def residual(problem, candidate):
    """Residual of `candidate` in both equations of every period."""
    _check_solution(problem, candidate)
    R1, R2 = [], []
    for k in range(problem.p):
        X, Y = candidate.X[k], candidate.Y[k]
        R1.append(problem.E[k] - (problem.A[k] @ X - Y @ problem.B[k]))
        R2.append(problem.F[k] - (problem.C[k] @ candidate.x_next(k) - Y @ problem.D[k]))
    return ResidualSet(tuple(R1), tuple(R2))


def default_tolerances(problem):
    """Frobenius norms of the coefficient matrices (relative backward error).

    Raises
    ------
    DataError
        If any coefficient matrix is zero; pass explicit tolerances instead.
    """
    arr = np.array([[np.linalg.norm(M) for M in problem.blocks(k)]
                     for k in range(problem.p)])
    zero = [f"{BLOCKS[j]}[{k + 1}]" for k, j in zip(*np.nonzero(arr == 0))]
    if zero:
        raise DataError("zero coefficient matrices " + ", ".join(zero)
                        + " give zero tolerances; supply explicit tolerances")
    return ToleranceSet.from_array(arr)


def apply_perturbation(problem, delta):
    """Return the problem with coefficients ``A_k + dA_k, ..., F_k + dF_k``."""
    if delta.p != problem.p:
        raise DimensionError(f"perturbation has {delta.p} periods, problem has {problem.p}")
    new = {}
    for name in BLOCKS:
        mats = []
        for k, (M, dM) in enumerate(zip(getattr(problem, name), getattr(delta, "d" + name))):
            if M.shape != dM.shape:
                raise DimensionError(f"d{name}[{k + 1}] has shape {dM.shape}, expected {M.shape}")
            mats.append(M + dM)
        new[name] = tuple(mats)
    return PgcsProblem(problem.p, problem.m, problem.n, **new)
