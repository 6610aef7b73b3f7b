"""
Intersection domain models.
Represents the outcome of counting #(gP ∩ Q) for one group element g.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from exceptions import ValidationError
from models.projective import ProjectivePoint


class IntersectionFlag(str, Enum):
    """Transversality verdict of one count."""
    CLEAN = 'clean'
    NEAR_DEGENERATE = 'near_degenerate'
    FAILED = 'failed'


class CountMethod(str, Enum):
    """How the intersection points were found."""
    PARAMETRIC = 'parametric'
    LEVELSET = 'levelset'
    EIGEN_ORACLE = 'eigen_oracle'


@dataclass(frozen=True)
class CounterSettings:
    """
    Tolerances and seed grids used by the intersection counter.

    Attributes:
        gap_tolerance: accept a parametric zero when chordal gap <= this
        residual_tolerance: accept a level-set zero when ||residual|| <= this
        dedupe_radius: points closer than this (fs_distance) are merged
        sigma_min: transversality gate on sigma_angle
        max_iterations: Newton budget per seed
        max_halvings: step halvings per damped Newton step
        parametric_grid: seeds per axis for count_parametric (0 = default)
        levelset_grid: seeds per axis for count_levelset
        deformed_grid: seeds per axis when the moving model is Deformed
        max_points: more distinct points than this marks the count failed
    """

    gap_tolerance: float = 1e-16
    residual_tolerance: float = 1e-10
    dedupe_radius: float = 1e-6
    sigma_min: float = 1e-4
    max_iterations: int = 60
    max_halvings: int = 6
    parametric_grid: int = 0
    levelset_grid: int = 64
    deformed_grid: int = 32
    max_points: int = 256

    def __post_init__(self):
        """Validate data immediately after object creation."""
        if self.gap_tolerance <= 0 or self.residual_tolerance <= 0:
            raise ValidationError("Zero-detection tolerances must be positive.")
        if self.dedupe_radius <= 0 or self.sigma_min < 0:
            raise ValidationError("Dedupe radius must be positive, sigma_min >= 0.")
        if self.max_iterations < 1 or self.max_halvings < 0:
            raise ValidationError("Newton budget must allow at least one step.")
        if self.parametric_grid != 0 and self.parametric_grid < 12:
            raise ValidationError("Parametric seed grid must be >= 12 per axis.")
        if self.levelset_grid < 4 or self.deformed_grid < 4:
            raise ValidationError("Level-set seed grids must be >= 4 per axis.")

    def parametric_grid_for(self, n: int) -> int:
        """Seeds per axis of the 2n-dimensional parametric search."""
        if self.parametric_grid:
            return self.parametric_grid
        return 48 if n == 1 else 12


@dataclass(frozen=True, eq=False)
class IntersectionReport:
    """
    Deduplicated transverse intersection points of gP ∩ Q.

    Domain Rules:
    - count equals the number of listed points and sigma values
    - min_sigma is the smallest listed sigma (None without points)

    Attributes:
        count: number of distinct intersection points
        points: gauge-fixed points, sorted canonically
        sigmas: sigma_angle of the tangent planes at each point
        min_sigma: smallest sigma over the points
        flag: clean / near_degenerate / failed
        method: parametric / levelset / eigen_oracle
        diagnostics: seeds tried, Newton iteration histogram, ...
    """

    count: int
    points: Tuple[ProjectivePoint, ...]
    sigmas: Tuple[float, ...]
    min_sigma: Optional[float]
    flag: IntersectionFlag
    method: CountMethod
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        """Validate data immediately after object creation."""
        object.__setattr__(self, 'points', tuple(self.points))
        object.__setattr__(self, 'sigmas', tuple(float(s) for s in self.sigmas))
        self._validate()

    def _validate(self):
        """Raises ValidationError if the report is inconsistent."""
        if self.count != len(self.points) or self.count != len(self.sigmas):
            raise ValidationError("Count must match the listed points and sigmas.")
        if self.sigmas and self.min_sigma != min(self.sigmas):
            raise ValidationError("min_sigma must be attained by a listed point.")
        if not self.sigmas and self.min_sigma is not None:
            raise ValidationError("min_sigma must be None without points.")

    @property
    def is_clean(self) -> bool:
        """True when the sample enters Monte Carlo statistics."""
        return self.flag is IntersectionFlag.CLEAN

    def to_record(self) -> dict:
        """Serializable JSON record."""
        return {
            'count': self.count,
            'points': [p.to_reals() for p in self.points],
            'sigmas': list(self.sigmas),
            'min_sigma': self.min_sigma,
            'flag': self.flag.value,
            'method': self.method.value,
            'diagnostics': self.diagnostics
        }

    def __str__(self) -> str:
        """String representation for display purposes."""
        sigma = "n/a" if self.min_sigma is None else f"{self.min_sigma:.4f}"
        return (
            f"{self.method.value}: count={self.count} | "
            f"min_sigma={sigma} | {self.flag.value}"
        )
