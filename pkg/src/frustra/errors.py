"""Exception types shared across the package.

The CLI maps these onto exit codes: validation/domain problems -> 2,
instability/convergence/phase problems -> 3, fit quality -> 4.
"""


class FrustraError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(FrustraError, ValueError):
    """Invalid parameters or configuration (bad ranges, inconsistent flags)."""


class DomainError(FrustraError, ValueError):
    """Input outside the mathematical domain of an operation."""


class InstabilityError(FrustraError, RuntimeError):
    """The model is unstable at the requested point (negative curvature,
    non-positive-definite quadratic form, imaginary excitation energy)."""


class ConvergenceError(FrustraError, RuntimeError):
    """The minimizer failed to converge from any seed."""

    def __init__(self, message: str, best_residual: float | None = None):
        super().__init__(message)
        self.best_residual = best_residual


class PhaseError(FrustraError, RuntimeError):
    """An operation was requested in a phase where it is not defined."""


class FitQualityError(FrustraError, RuntimeError):
    """A power-law fit did not meet the quality threshold."""

    def __init__(self, message: str, r_squared: float | None = None):
        super().__init__(message)
        self.r_squared = r_squared
