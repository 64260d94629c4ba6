"""Power-sum approximants of algebraic branches and empirical checks of rational-approximation bounds."""

from .errors import (AmbiguityError, BranchInconsistentError, HypothesisError, InputError,
                     PrecisionCapError, PsApproxError)
from .eta import Approximant, build_eta_multi, build_eta_single, certify_error, hypothesis_scan
from .implicit import ImplicitInstance, build_F, solve_series, validate_hypotheses
from .powersum import PowerSum, denominator_check
from .puiseux import BiPoly, PuiseuxBranch, coates_log_bound, expand_at_infinity
from .verify import (MultiProblem, SingleProblem, best_approximations, check_multi_bound,
                     check_single_bound, eval_alpha, subspace_instrument, subspace_product)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityError", "BranchInconsistentError", "HypothesisError", "InputError",
    "PrecisionCapError", "PsApproxError", "Approximant", "build_eta_multi", "build_eta_single",
    "certify_error", "hypothesis_scan", "ImplicitInstance", "build_F", "solve_series",
    "validate_hypotheses", "PowerSum", "denominator_check", "BiPoly", "PuiseuxBranch",
    "coates_log_bound", "expand_at_infinity", "MultiProblem", "SingleProblem",
    "best_approximations", "check_multi_bound", "check_single_bound", "eval_alpha",
    "subspace_instrument", "subspace_product",
]
