"""Exception types shared across the package."""


class PsApproxError(Exception):
    """Base class for all library errors."""


class InputError(PsApproxError, ValueError):
    """Malformed or out-of-range input."""


class HypothesisError(PsApproxError):
    """A mathematical precondition does not hold for the given data."""


class PrecisionCapError(PsApproxError):
    """Adaptive precision reached the configured cap without deciding."""


class AmbiguityError(PsApproxError):
    """A root or branch could not be singled out."""


class BranchInconsistentError(PsApproxError):
    """A computed Puiseux branch failed its residual self-check."""
