"""Periodic generalized coupled Sylvester equations: solution and sensitivity.

Solves ``A_k X_k - Y_k B_k = E_k``, ``C_k X_{k+1} - Y_k D_k = F_k``
(``k = 1..p``, ``X_{p+1} = X_1``) through the Kronecker form ``W z = g`` and
provides backward errors, perturbation bounds, exact condition numbers and
randomized condition estimates.
"""

from types import ModuleType as _ModuleType

from .assembly import (build_delta_W, build_scaled_operator, build_W, dense_cap,
                       pack_data_vector, pack_perturbation_vector, pack_rhs,
                       pack_solution, unpack_perturbation_vector, unpack_solution)
from .backward_error import BackwardErrorReport, backward_error_bounds
from .conditioning import (ConditionReport, condition_numbers, condition_upper_bounds,
                           entrywise_divide, omega_vector, pseudo_reciprocal)
from .errors import (DataError, DimensionError, NonConvergenceError, NumericalError,
                     PgcsError, RankDeficientError, SingularSystemError, SizeCapError)
from .estimators import (PceConditionResult, PceResult, SceResult, make_rng,
                         orthonormalize, pce_condition_numbers, pce_spectral_norm,
                         sce_condition_numbers, sce_from_directions, wallis)
from .kron import apply_sandwich, kronecker, unvectorize, vectorize
from .model import (BLOCKS, TOLERANCE_NAMES, PerturbationSet, PgcsProblem, PgcsSolution,
                    ResidualSet, ToleranceSet, apply_perturbation, check,
                    default_tolerances, residual, validate)
from .perturbation import (ComponentwiseBoundReport, PerturbationBoundReport,
                           componentwise_bounds, normwise_bounds, scaled_epsilon)
from .solver import (Factorization, PerronResult, factorize, factorize_problem,
                     inverse_product, min_norm_ls_solve, solve_pgcs,
                     spectral_norm_dense, spectral_radius_nonneg)

__version__ = "0.1.0"

__all__ = sorted(name for name, obj in globals().items()
                 if not name.startswith("_") and not isinstance(obj, _ModuleType))
