"""
Kinematic-formula result models.
Monte Carlo estimates of E_g[#(gP ∩ Q)] and the companion experiments.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from exceptions import ValidationError
from models.lagrangian import VolumeEstimate


@dataclass(frozen=True)
class KinematicEstimate:
    """
    Monte Carlo mean of #(gP ∩ Q) against the closed-form prediction.

    Domain Rules:
    - samples >= 1, std_error >= 0, excluded_fraction in [0, 1]
    - z_score is None only when std_error is 0 and mean != predicted

    Attributes:
        pair: descriptors of P and Q
        samples: Haar samples drawn
        clean_samples: samples entering the statistics
        mean: arithmetic mean of clean counts
        std_error: sample standard deviation / sqrt(clean samples)
        predicted: (n+1) vol(P) vol(Q) / vol(RP^n)^2
        z_score: (mean - predicted) / std_error
        excluded_fraction: share of non-clean samples
        master_seed: seed of the experiment
        count_histogram: clean count -> number of samples
        volumes: quadrature volumes of P and Q
        oracle_disagreements: RP^n samples where the eigen oracle disagrees
            with the numeric count (None when not checked)
    """

    pair: Tuple[dict, dict]
    samples: int
    clean_samples: int
    mean: float
    std_error: float
    predicted: float
    z_score: Optional[float]
    excluded_fraction: float
    master_seed: int
    count_histogram: Dict[int, int] = field(default_factory=dict)
    volumes: Tuple[float, float] = (0.0, 0.0)
    oracle_disagreements: Optional[int] = None

    def __post_init__(self):
        """Validate data immediately after object creation."""
        if self.samples < 1 or not 0 <= self.clean_samples <= self.samples:
            raise ValidationError("Sample counts are inconsistent.")
        if self.std_error < 0:
            raise ValidationError("Standard error cannot be negative.")
        if not 0.0 <= self.excluded_fraction <= 1.0:
            raise ValidationError("Excluded fraction must be within [0, 1].")

    def to_record(self) -> dict:
        """Serializable JSON record."""
        return {
            'pair': list(self.pair),
            'samples': self.samples,
            'clean_samples': self.clean_samples,
            'mean': self.mean,
            'std_error': self.std_error,
            'predicted': self.predicted,
            'z_score': self.z_score,
            'excluded_fraction': self.excluded_fraction,
            'master_seed': self.master_seed,
            'count_histogram': {str(k): v for k, v in sorted(self.count_histogram.items())},
            'volumes': list(self.volumes),
            'oracle_disagreements': self.oracle_disagreements
        }

    def __str__(self) -> str:
        """String representation for display purposes."""
        z = "n/a" if self.z_score is None else f"{self.z_score:+.3f}"
        return (
            f"mean={self.mean:.6f} ± {self.std_error:.6f} | "
            f"predicted={self.predicted:.6f} | z={z} | "
            f"excluded={self.excluded_fraction:.2%}"
        )


@dataclass(frozen=True)
class SigmaConstancyReport:
    """
    Stabilizer averages of sigma_angle for several plane configurations.

    Attributes:
        n: projective dimension
        draws: stabilizer draws per configuration
        master_seed: seed of the experiment
        means: estimated sigma(p, q) per configuration
        std_errors: standard errors of the means
        max_pairwise_z: largest |m_i - m_j| / sqrt(se_i^2 + se_j^2)
        analytic_reference: closed-form value when known (2/pi for n = 1)
        analytic_z: largest z-score against the reference
    """

    n: int
    draws: int
    master_seed: int
    means: Tuple[float, ...]
    std_errors: Tuple[float, ...]
    max_pairwise_z: float
    analytic_reference: Optional[float] = None
    analytic_z: Optional[float] = None

    def __post_init__(self):
        """Validate data immediately after object creation."""
        if len(self.means) != len(self.std_errors) or len(self.means) < 1:
            raise ValidationError("Each configuration needs a mean and a standard error.")

    def to_record(self) -> dict:
        """Serializable JSON record."""
        return {
            'n': self.n,
            'draws': self.draws,
            'master_seed': self.master_seed,
            'means': list(self.means),
            'std_errors': list(self.std_errors),
            'max_pairwise_z': self.max_pairwise_z,
            'analytic_reference': self.analytic_reference,
            'analytic_z': self.analytic_z
        }


@dataclass(frozen=True)
class ChoCheckReport:
    """
    Cho-bound and volume experiment for one Hamiltonian deformation of L_2.

    Attributes:
        hamiltonian: descriptor of H
        time: flow time T
        volume: quadrature volume of P = phi_T(L_n)
        clifford_volume: vol(L_n) (closed form)
        volume_ratio: vol(P) / vol(L_n)
        a_n: the lower-bound constant
        bound_satisfied: volume_ratio >= a_n - 1e-6
        oh_conjecture_observed: vol(P) >= vol(L_n) (reported, not asserted)
        min_clean_count: smallest clean intersection count with L_n
        all_counts_even: parity of clean counts
        lagrangian_defect: max |omega| of the deformed frames
        estimate: kinematic estimate for the pair (P, L_n)
    """

    hamiltonian: dict
    time: float
    volume: VolumeEstimate
    clifford_volume: float
    volume_ratio: float
    a_n: float
    bound_satisfied: bool
    oh_conjecture_observed: bool
    min_clean_count: Optional[int]
    all_counts_even: bool
    lagrangian_defect: float
    estimate: KinematicEstimate

    @property
    def cho_bound_holds(self) -> bool:
        """Every clean count meets 2^n."""
        n = self.hamiltonian['n']
        return self.min_clean_count is not None and self.min_clean_count >= 2 ** n

    def to_record(self) -> dict:
        """Serializable JSON record."""
        return {
            'hamiltonian': self.hamiltonian,
            'time': self.time,
            'volume': self.volume.to_record(),
            'clifford_volume': self.clifford_volume,
            'volume_ratio': self.volume_ratio,
            'a_n': self.a_n,
            'bound_satisfied': self.bound_satisfied,
            'oh_conjecture_observed': self.oh_conjecture_observed,
            'min_clean_count': self.min_clean_count,
            'all_counts_even': self.all_counts_even,
            'cho_bound_holds': self.cho_bound_holds,
            'lagrangian_defect': self.lagrangian_defect,
            'estimate': self.estimate.to_record()
        }
