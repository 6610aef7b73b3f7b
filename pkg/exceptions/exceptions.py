"""
Custom exception classes for handling
specific error scenarios in the workbench.
"""


class WorkbenchError(Exception):
    """Base exception for all Clifford Bench errors."""
    pass


class ValidationError(WorkbenchError):
    """Raised when a domain value fails validation."""
    pass


class UsageError(ValidationError):
    """Raised when command-line or config file input is invalid."""
    pass


class GeometryError(WorkbenchError):
    """Raised when a geometric precondition is violated."""
    pass


class ZeroVectorError(GeometryError):
    """Raised when a homogeneous vector is too close to zero."""
    pass


class DimensionMismatchError(GeometryError):
    """Raised when two objects live in different projective spaces."""
    pass


class NotHorizontalError(GeometryError):
    """Raised when a tangent vector is not horizontal at its base point."""
    pass


class BasePointMismatchError(GeometryError):
    """Raised when two frames are not based at the same projective point."""
    pass


class DegenerateFrameError(GeometryError):
    """Raised when a tangent frame is (numerically) linearly dependent."""
    pass


class NotUnitError(GeometryError):
    """Raised when a point of the sphere is not of unit length."""
    pass


class NumericalError(WorkbenchError):
    """Raised when a numerical procedure cannot deliver a trustworthy result."""
    pass


class StepTooLargeError(NumericalError):
    """Raised when a flow integration drifts off its energy level."""
    pass


class ConvergenceBudgetExceededError(NumericalError):
    """Raised when every Newton seed runs out of iterations."""
    pass


class DegenerateSpectrumError(NumericalError):
    """Raised when eigenvalues are too close to separate eigenvectors."""
    pass


class TooManyExcludedError(NumericalError):
    """
    Raised when too many Monte Carlo samples are non-transverse.
    The partially aggregated estimate is kept on the exception.
    """

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class RepositoryError(WorkbenchError):
    """Raised when report persistence fails."""
    pass


class AcceptanceError(WorkbenchError):
    """Raised when an experiment violates its acceptance criterion."""
    pass
