"""Initialize the models package."""

from .projective import ProjectivePoint, HorizontalFrame, real_coordinates
from .unitary import UnitaryMatrix, SeedStream
from .hamiltonian import HamiltonianTerm, HamiltonianSpec
from .lagrangian import (
    LagrangianKind,
    ResidualKind,
    LevelSetResidual,
    ParametricLagrangian,
    VolumeEstimate
)
from .intersection import (
    IntersectionFlag,
    CountMethod,
    CounterSettings,
    IntersectionReport
)
from .kinematic import KinematicEstimate, SigmaConstancyReport, ChoCheckReport
from .constants import ConstantsRow
from .run_config import RunConfig

__all__ = [
    'ProjectivePoint',
    'HorizontalFrame',
    'real_coordinates',
    'UnitaryMatrix',
    'SeedStream',
    'HamiltonianTerm',
    'HamiltonianSpec',
    'LagrangianKind',
    'ResidualKind',
    'LevelSetResidual',
    'ParametricLagrangian',
    'VolumeEstimate',
    'IntersectionFlag',
    'CountMethod',
    'CounterSettings',
    'IntersectionReport',
    'KinematicEstimate',
    'SigmaConstancyReport',
    'ChoCheckReport',
    'ConstantsRow',
    'RunConfig'
]
