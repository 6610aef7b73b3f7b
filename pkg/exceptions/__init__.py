"""Exception module for Clifford Bench."""

from .exceptions import (
    WorkbenchError,
    ValidationError,
    UsageError,
    GeometryError,
    ZeroVectorError,
    DimensionMismatchError,
    NotHorizontalError,
    BasePointMismatchError,
    DegenerateFrameError,
    NotUnitError,
    NumericalError,
    StepTooLargeError,
    ConvergenceBudgetExceededError,
    DegenerateSpectrumError,
    TooManyExcludedError,
    RepositoryError,
    AcceptanceError
)

__all__ = [
    'WorkbenchError',
    'ValidationError',
    'UsageError',
    'GeometryError',
    'ZeroVectorError',
    'DimensionMismatchError',
    'NotHorizontalError',
    'BasePointMismatchError',
    'DegenerateFrameError',
    'NotUnitError',
    'NumericalError',
    'StepTooLargeError',
    'ConvergenceBudgetExceededError',
    'DegenerateSpectrumError',
    'TooManyExcludedError',
    'RepositoryError',
    'AcceptanceError'
]
