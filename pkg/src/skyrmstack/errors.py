"""Exception types shared across the package."""


class SkyrmstackError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SkyrmstackError, ValueError):
    """Argument outside the mathematical domain of a function."""


class InvalidInputError(SkyrmstackError, ValueError):
    """Physical or structural input fails its invariants."""


class AdmissibilityError(InvalidInputError):
    """A skyrmion radius lies outside the admissible interval (0, 1/L0)."""


class InvalidConfigError(SkyrmstackError, ValueError):
    """Configuration value violates a documented constraint."""


class UnsupportedRegimeError(SkyrmstackError, ValueError):
    """Inputs are valid numbers but lie outside the model's regime."""


class NumericError(SkyrmstackError, RuntimeError):
    """A numerical procedure failed to reach its accuracy target.

    Carries diagnostics in ``details`` (achieved error, iteration counts, ...).
    """

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class ResolutionError(NumericError):
    """A grid-based estimate is too coarse to be trusted."""


class ConvergenceError(NumericError):
    """An iterative minimization failed to converge."""
