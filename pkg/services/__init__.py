"""Service layer for Clifford Bench."""

from .intersection_service import IntersectionService
from .kinematic_service import KinematicService
from .experiment_service import ExperimentService

__all__ = ['IntersectionService', 'KinematicService', 'ExperimentService']
