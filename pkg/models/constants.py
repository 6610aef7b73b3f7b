"""
Constants-ledger model.
One row of closed-form volumes and bounds for a fixed dimension n.
"""

import math
from dataclasses import dataclass, field
from typing import Dict

from exceptions import ValidationError

IDENTITY_TOLERANCE = 1e-13


@dataclass(frozen=True)
class ConstantsRow:
    """
    Closed-form constants of CP^n.

    Domain Rules:
    - vol_rp_n = vol_sphere_n / 2
    - eqsup_ratio = vol_rp_n^2 / (n+1)
    - lower_bound^2 = 2^n * eqsup_ratio
    - a_n = lower_bound / vol_clifford_n

    Attributes:
        n: projective dimension
        vol_sphere_n: vol(S^n)
        vol_rp_n: vol(RP^n)
        vol_clifford_n: vol(L_n)
        eqsup_ratio: vol(SU(n+1)) / c_n
        lower_bound: minimal volume of a Hamiltonian deformation of L_n
        a_n: lower_bound / vol(L_n)
        symbolic: exact expressions keyed by field name
    """

    n: int
    vol_sphere_n: float
    vol_rp_n: float
    vol_clifford_n: float
    eqsup_ratio: float
    lower_bound: float
    a_n: float
    symbolic: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        """Validate data immediately after object creation."""
        self._validate()

    def _validate(self):
        """Raises ValidationError if a ledger identity fails."""
        checks = [
            (self.vol_rp_n, self.vol_sphere_n / 2, "vol(RP^n) = vol(S^n)/2"),
            (self.eqsup_ratio, self.vol_rp_n ** 2 / (self.n + 1), "ratio identity"),
            (self.lower_bound ** 2, 2 ** self.n * self.eqsup_ratio, "chain identity"),
            (self.a_n, self.lower_bound / self.vol_clifford_n, "a_n identity"),
        ]
        for actual, expected, label in checks:
            if not math.isclose(actual, expected, rel_tol=IDENTITY_TOLERANCE):
                raise ValidationError(f"Constants row violates {label}.")

    def to_record(self) -> dict:
        """Serializable JSON record."""
        return {
            'n': self.n,
            'vol_sphere_n': self.vol_sphere_n,
            'vol_rp_n': self.vol_rp_n,
            'vol_clifford_n': self.vol_clifford_n,
            'eqsup_ratio': self.eqsup_ratio,
            'lower_bound': self.lower_bound,
            'a_n': self.a_n,
            'symbolic': dict(self.symbolic)
        }
