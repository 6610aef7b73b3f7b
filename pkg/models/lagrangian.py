"""
Lagrangian submanifold descriptors.
Models are immutable descriptions; charts, frames and volumes are
evaluated by geometry.lagrangian_models.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from exceptions import ValidationError
from models.hamiltonian import HamiltonianSpec
from models.unitary import UnitaryMatrix


class LagrangianKind(str, Enum):
    """Kinds of parametric Lagrangians."""
    CLIFFORD = 'clifford'
    REAL_PROJECTIVE = 'rp'
    UNITARY_IMAGE = 'unitary_image'
    DEFORMED = 'deformed'


class ResidualKind(str, Enum):
    """Submanifolds with known defining equations."""
    CLIFFORD = 'clifford'
    REAL_PROJECTIVE = 'rp'


@dataclass(frozen=True)
class LevelSetResidual:
    """
    Defining equations of a Lagrangian target.

    Attributes:
        kind: Clifford torus or RP^n
        n: projective dimension
    """

    kind: ResidualKind
    n: int

    def __post_init__(self):
        """Validate data immediately after object creation."""
        if not isinstance(self.kind, ResidualKind):
            raise ValidationError("Residual kind must be a ResidualKind.")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError("Residual dimension n must be >= 1.")

    @property
    def arity(self) -> int:
        """Number of residual components."""
        if self.kind is ResidualKind.CLIFFORD:
            return self.n
        return self.n * (self.n + 1) // 2


@dataclass(frozen=True, eq=False)
class ParametricLagrangian:
    """
    A Lagrangian submanifold of CP^n exposed as a parametric chart.

    Domain Rules:
    - Clifford and RealProjective are roots and carry no base
    - UnitaryImage needs a base and a unitary of matching size
    - Deformed needs a Clifford-rooted torus base and a Hamiltonian
    - flow and finite-difference steps are positive, flow step <= 1e-2

    Attributes:
        kind: which construction the model uses
        n: projective dimension
        base: model being transformed (UnitaryImage, Deformed)
        unitary: matrix g of a UnitaryImage
        hamiltonian: generator of a Deformed model
        time: flow time of a Deformed model
        flow_step: RK4 step used to evaluate the Deformed chart
        fd_step: finite-difference step for Deformed frames
    """

    kind: LagrangianKind
    n: int
    base: Optional['ParametricLagrangian'] = None
    unitary: Optional[UnitaryMatrix] = None
    hamiltonian: Optional[HamiltonianSpec] = None
    time: float = 0.0
    flow_step: float = 1e-3
    fd_step: float = 1e-5

    def __post_init__(self):
        """Validate data immediately after object creation."""
        self._validate()

    def _validate(self):
        """Raises ValidationError if the description is inconsistent."""
        if not isinstance(self.kind, LagrangianKind):
            raise ValidationError("Lagrangian kind must be a LagrangianKind.")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError("Lagrangian dimension n must be >= 1.")

        if self.kind in (LagrangianKind.CLIFFORD, LagrangianKind.REAL_PROJECTIVE):
            if self.base is not None:
                raise ValidationError(f"{self.kind.value} model takes no base.")
            return

        if self.base is None or self.base.n != self.n:
            raise ValidationError("Transformed model needs a base of the same n.")

        if self.kind is LagrangianKind.UNITARY_IMAGE:
            if self.unitary is None or self.unitary.dimension != self.n + 1:
                raise ValidationError(
                    f"Unitary image needs a {self.n + 1}x{self.n + 1} unitary."
                )
            return

        if not self.base.is_torus:
            raise ValidationError("Only Clifford-rooted tori can be deformed.")
        if self.hamiltonian is None or self.hamiltonian.n != self.n:
            raise ValidationError("Deformed model needs a Hamiltonian of the same n.")
        if not 0 < self.flow_step <= 1e-2:
            raise ValidationError("Flow step must be in (0, 1e-2].")
        if self.fd_step <= 0:
            raise ValidationError("Finite-difference step must be positive.")

    @classmethod
    def clifford(cls, n: int) -> 'ParametricLagrangian':
        """The Clifford torus L_n."""
        return cls(LagrangianKind.CLIFFORD, n)

    @classmethod
    def real_projective(cls, n: int) -> 'ParametricLagrangian':
        """The real points RP^n."""
        return cls(LagrangianKind.REAL_PROJECTIVE, n)

    @classmethod
    def unitary_image(cls, base: 'ParametricLagrangian',
                      unitary: UnitaryMatrix) -> 'ParametricLagrangian':
        """The image g(base)."""
        return cls(LagrangianKind.UNITARY_IMAGE, base.n, base=base, unitary=unitary)

    @property
    def root(self) -> 'ParametricLagrangian':
        """The Clifford or RealProjective model at the bottom of the chain."""
        model = self
        while model.base is not None:
            model = model.base
        return model

    @property
    def is_torus(self) -> bool:
        """True for models parametrized by the flat torus T^n."""
        return self.root.kind is LagrangianKind.CLIFFORD

    @property
    def param_dim(self) -> int:
        """Number of chart parameters (RP^n uses ambient x in R^(n+1))."""
        return self.n if self.is_torus else self.n + 1

    @property
    def level_set(self) -> Optional[LevelSetResidual]:
        """Defining equations, when the model is a root model."""
        if self.kind is LagrangianKind.CLIFFORD:
            return LevelSetResidual(ResidualKind.CLIFFORD, self.n)
        if self.kind is LagrangianKind.REAL_PROJECTIVE:
            return LevelSetResidual(ResidualKind.REAL_PROJECTIVE, self.n)
        return None

    def describe(self) -> dict:
        """Serializable descriptor embedded in reports."""
        record = {'kind': self.kind.value, 'n': self.n}
        if self.base is not None:
            record['base'] = self.base.describe()
        if self.unitary is not None:
            record['unitary'] = self.unitary.describe()
        if self.hamiltonian is not None:
            record['hamiltonian'] = self.hamiltonian.describe()
            record['time'] = float(self.time)
            record['flow_step'] = float(self.flow_step)
            record['fd_step'] = float(self.fd_step)
        return record

    def __str__(self) -> str:
        """Short label for display purposes."""
        if self.kind is LagrangianKind.UNITARY_IMAGE:
            return f"g({self.base})"
        if self.kind is LagrangianKind.DEFORMED:
            return f"phi_{self.time:g}({self.base})"
        return f"{self.kind.value}^{self.n}"


@dataclass(frozen=True)
class VolumeEstimate:
    """
    Riemannian volume of a Lagrangian by midpoint quadrature.

    Attributes:
        value: Richardson-extrapolated volume (used for acceptance)
        fine: midpoint value on the requested grid
        coarse: midpoint value on the half grid
        richardson_gauge: |coarse - fine|
        integrand_spread: standard deviation of the fine-grid integrand
        grid: nodes per axis of the fine grid
    """

    value: float
    fine: float
    coarse: float
    richardson_gauge: float
    integrand_spread: float
    grid: int

    def to_record(self) -> dict:
        """Serializable form."""
        return {
            'value': self.value,
            'fine': self.fine,
            'coarse': self.coarse,
            'richardson_gauge': self.richardson_gauge,
            'integrand_spread': self.integrand_spread,
            'grid': self.grid
        }
