"""Exception hierarchy.

Data errors (bad shapes, non-finite entries, zero tolerances) and numerical
errors (singular systems, rank loss, size caps) are kept apart so callers and
the command line front end can map them to different exit codes.
"""


class PgcsError(Exception):
    """Base class for all package errors."""


class DataError(PgcsError, ValueError):
    """Malformed input data."""

    def __init__(self, message, problems=None):
        super().__init__(message)
        self.problems = list(problems or [])


class DimensionError(DataError):
    """Operands have incompatible shapes."""


class NumericalError(PgcsError, ArithmeticError):
    """A numerical procedure could not deliver a trustworthy result."""


class SingularSystemError(NumericalError):
    """The coefficient matrix W is numerically singular."""


class RankDeficientError(NumericalError):
    """A short-fat operator lost full row rank.

    The minimum-norm least-squares solution computed by the SVD fallback is
    attached as ``solution`` so the caller can still use it.
    """

    def __init__(self, message, solution=None, rank=None):
        super().__init__(message)
        self.solution = solution
        self.rank = rank


class SizeCapError(NumericalError):
    """An explicit dense construction would exceed the configured cap."""


class NonConvergenceError(NumericalError):
    """An iteration hit its budget without meeting the stopping test."""
