"""
Projective domain models.
Defines points of CP^n and horizontal tangent frames with built-in validation.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from exceptions import (
    ValidationError,
    NotHorizontalError,
    DegenerateFrameError
)

UNIT_TOLERANCE = 1e-12
HORIZONTAL_TOLERANCE = 1e-10
FRAME_GRAM_TOLERANCE = 1e-12


def real_coordinates(vectors: np.ndarray) -> np.ndarray:
    """Stack real and imaginary parts: C^m vectors become R^2m vectors."""
    return np.concatenate([vectors.real, vectors.imag], axis=-1)


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """
    A point of CP^n held as a unit homogeneous representative.

    Domain Rules:
    - z is a one-dimensional complex vector of length n+1 >= 2
    - ||z|| = 1 within 1e-12
    - the representative is not gauge fixed; see gauge_fix for the
      canonical one

    Attributes:
        z: homogeneous coordinates (read-only numpy array)
    """

    z: np.ndarray

    def __post_init__(self):
        """Validate data immediately after object creation."""
        object.__setattr__(self, 'z', np.array(self.z, dtype=complex))
        self._validate()
        self.z.setflags(write=False)

    def _validate(self):
        """
        Validate the representative.
        Raises ValidationError if any rule is violated.
        """
        if self.z.ndim != 1 or self.z.size < 2:
            raise ValidationError(
                "Homogeneous coordinates must be a vector of length >= 2."
            )
        if not np.all(np.isfinite(self.z)):
            raise ValidationError("Homogeneous coordinates must be finite.")
        if abs(np.linalg.norm(self.z) - 1.0) > UNIT_TOLERANCE:
            raise ValidationError(
                "Homogeneous representative must have unit norm."
            )

    @property
    def n(self) -> int:
        """Complex dimension of the ambient projective space."""
        return self.z.size - 1

    def to_reals(self) -> List[float]:
        """Real parts followed by imaginary parts (2(n+1) numbers)."""
        return [float(x) for x in real_coordinates(self.z)]

    def __str__(self) -> str:
        """String representation for display purposes."""
        coords = " : ".join(f"{c.real:+.6f}{c.imag:+.6f}i" for c in self.z)
        return f"({coords})"


@dataclass(frozen=True, eq=False)
class HorizontalFrame:
    """
    A real-linearly independent family of horizontal tangent vectors.

    Domain Rules:
    - every vector v satisfies <v, z> = 0 (complex) within 1e-10
    - the real Gram matrix of the vectors is nonsingular

    Attributes:
        base: the point the vectors are attached to
        vectors: array of shape (k, n+1), one tangent vector per row
    """

    base: ProjectivePoint
    vectors: np.ndarray

    def __post_init__(self):
        """Validate data immediately after object creation."""
        vectors = np.atleast_2d(np.array(self.vectors, dtype=complex))
        object.__setattr__(self, 'vectors', vectors)
        self._validate()
        self.vectors.setflags(write=False)

    def _validate(self):
        """
        Validate shape, horizontality and independence.
        Raises: ValidationError, NotHorizontalError, DegenerateFrameError
        """
        if self.vectors.shape[-1] != self.base.z.size:
            raise ValidationError(
                "Frame vectors must have the base point's length."
            )
        if self.vectors.shape[0] < 1:
            raise ValidationError("A frame needs at least one vector.")

        scale = np.maximum(1.0, np.linalg.norm(self.vectors, axis=-1))
        vertical = np.abs(self.vectors @ self.base.z.conj()) / scale
        if np.max(vertical) > HORIZONTAL_TOLERANCE:
            raise NotHorizontalError(
                f"Frame vector not horizontal (residual {np.max(vertical):.2e})."
            )

        real = real_coordinates(self.vectors)
        if np.linalg.det(real @ real.T) < FRAME_GRAM_TOLERANCE:
            raise DegenerateFrameError("Frame vectors are linearly dependent.")

    @property
    def n(self) -> int:
        """Complex dimension of the ambient projective space."""
        return self.base.n

    @property
    def rank(self) -> int:
        """Number of vectors in the frame."""
        return self.vectors.shape[0]
