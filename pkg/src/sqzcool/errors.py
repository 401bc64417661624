"""Exception types raised across the package."""


class SqzCoolError(Exception):
    """Base class for all package errors."""


class ValidationError(SqzCoolError, ValueError):
    """Parameters violate a physical or structural constraint."""


class NegativeInput(ValidationError):
    pass


class NonPositiveRate(ValidationError):
    pass


class ThresholdViolation(ValidationError):
    """Parametric oscillator at or above threshold (chi >= kappa_c)."""


class ConfigError(ValidationError):
    """Malformed configuration file or override."""


class DomainError(SqzCoolError, ValueError):
    """Argument outside the domain where a formula is defined."""


class Infeasible(SqzCoolError):
    """Requested squeezing cannot be realized, or matching has no finite solution."""


class NotCooling(SqzCoolError):
    """Net optical damping is not positive; occupancy is undefined."""


class InternalInconsistency(SqzCoolError, RuntimeError):
    """Two independent evaluation routes disagree beyond tolerance."""


class UnstableModel(SqzCoolError):
    """Drift matrix has an eigenvalue with nonnegative real part."""


class SolverFailure(SqzCoolError, RuntimeError):
    pass


class NoMinimumInWindow(SqzCoolError):
    """Objective is monotone across the search window."""


class EmptyInput(SqzCoolError, ValueError):
    pass
