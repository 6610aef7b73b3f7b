"""
Kinematic verification service.
Monte Carlo estimates of E_g[#(gP ∩ Q)] over Haar-random g in SU(n+1),
compared with the closed form (n+1) vol(P) vol(Q) / vol(RP^n)^2, plus the
sigma-constancy test and the Cho-bound/volume experiment.
"""

import logging
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from exceptions import (
    ConvergenceBudgetExceededError,
    NumericalError,
    TooManyExcludedError,
    ValidationError
)
from geometry.constants_ledger import clifford_volume, lower_bound_and_a, rp_volume
from geometry.hamiltonian_flow import deform_lagrangian
from geometry.lagrangian_models import frame, lagrangian_defect, volume
from geometry.projective_core import sigma_angle, transform_frame
from geometry.random_unitary import (
    derive_stream,
    haar_from_generator,
    haar_unitary,
    stabilizer_sample,
    to_special,
    transport_unitary
)
from models import (
    ChoCheckReport,
    CountMethod,
    HamiltonianSpec,
    IntersectionFlag,
    IntersectionReport,
    KinematicEstimate,
    LagrangianKind,
    ParametricLagrangian,
    ProjectivePoint,
    SigmaConstancyReport,
    UnitaryMatrix
)
from repositories.base import SampleLogRepository
from services.intersection_service import IntersectionService, same_point_sets

logger = logging.getLogger(__name__)

# seed stream namespaces
HAAR_DOMAIN = 0
STABILIZER_DOMAIN = 1
CONFIGURATION_DOMAIN = 3

MIN_SAMPLES = 30
MIN_PAIRS = 3
MIN_DRAWS = 1000
Z_TOLERANCE = 1e-5
LAGRANGIAN_TOLERANCE = 1e-6
BOUND_SLACK = 1e-6


@dataclass(frozen=True)
class SampleOutcome:
    """Result of one Haar sample."""
    index: int
    report: IntersectionReport
    oracle_agrees: Optional[bool]
    seconds: float


def z_score(mean: float, std_error: float, predicted: float) -> Optional[float]:
    """
    (mean - predicted) / std_error; with zero spread it is 0 when the mean
    equals the prediction (to 1e-5 relative) and None otherwise.
    """
    if std_error > 0:
        return (mean - predicted) / std_error
    if abs(mean - predicted) <= Z_TOLERANCE * max(1.0, abs(predicted)):
        return 0.0
    return None


class KinematicService:
    """
    Service running the Monte Carlo experiments.
    Samples are independent (one seed stream per index) and are reduced in
    index order, so estimates do not depend on the number of workers.
    """

    def __init__(
        self,
        counter: IntersectionService,
        sample_log: Optional[SampleLogRepository] = None,
        workers: int = 1,
        max_excluded_fraction: float = 0.02,
        volume_grid: int = 0
    ):
        """
        Initialize service with the counter and an optional sample log.
        """
        self._counter = counter
        self._sample_log = sample_log
        self._workers = max(1, workers)
        self._max_excluded_fraction = max_excluded_fraction
        self._volume_grid = volume_grid

    @staticmethod
    def predicted_mean(vol_p: float, vol_q: float, n: int) -> float:
        """
        E_g[#(gP ∩ Q)] under normalized Haar measure.
        Raises: ValidationError if a volume is not positive
        """
        if vol_p <= 0 or vol_q <= 0:
            raise ValidationError("Volumes must be positive.")
        return (n + 1) * vol_p * vol_q / rp_volume(n) ** 2

    def mc_estimate(
        self,
        P: ParametricLagrangian,
        Q: ParametricLagrangian,
        samples: int,
        master_seed: int,
        volumes: Optional[Tuple[float, float]] = None,
        oracle_check: bool = False,
        log_name: Optional[str] = None
    ) -> KinematicEstimate:
        """
        Average #(g_i P ∩ Q) over g_i = to_special(haar_unitary(stream i)).

        Args:
            P, Q: the two Lagrangians (same n)
            samples: Haar samples, at least 30
            master_seed: experiment seed
            volumes: precomputed quadrature volumes of P and Q
            oracle_check: for RP^n pairs, compare each count with the eigen oracle
            log_name: sample log to stream one row per sample into

        Raises:
            ValidationError: fewer than 30 samples
            TooManyExcludedError: excluded fraction above the threshold
                (the partial estimate travels with the error)
        """
        if samples < MIN_SAMPLES:
            raise ValidationError(f"Monte Carlo estimates need >= {MIN_SAMPLES} samples.")
        n = P.n
        if volumes is None:
            vol_p = volume(P, self._volume_grid).value
            vol_q = vol_p if Q is P else volume(Q, self._volume_grid).value
            volumes = (vol_p, vol_q)
        predicted = self.predicted_mean(volumes[0], volumes[1], n)
        check_oracle = oracle_check and (
            P.kind is LagrangianKind.REAL_PROJECTIVE and Q.kind is LagrangianKind.REAL_PROJECTIVE
        )
        logger.info("Monte Carlo %s vs %s: %d samples, seed %d", P, Q, samples, master_seed)

        def run(index: int) -> SampleOutcome:
            started = time.perf_counter()
            g = to_special(haar_unitary(n + 1, derive_stream(master_seed, index, HAAR_DOMAIN)))
            report = self._count_sample(P, Q, g, index)
            agrees = None
            if check_oracle and report.is_clean:
                oracle = self._counter.rp_eigen_oracle(g)
                if oracle.is_clean:
                    agrees = same_point_sets(report, oracle)
            return SampleOutcome(index, report, agrees, time.perf_counter() - started)

        counts, disagreements = [], 0
        if self._sample_log is not None and log_name:
            self._sample_log.open(log_name)
        try:
            with ThreadPoolExecutor(max_workers=self._workers) as executor:
                for outcome in executor.map(run, range(samples)):
                    report = outcome.report
                    if report.is_clean:
                        counts.append(report.count)
                    else:
                        logger.warning("Sample %d excluded (%s)", outcome.index, report.flag.value)
                    if outcome.oracle_agrees is False:
                        disagreements += 1
                        logger.warning("Sample %d: eigen oracle disagrees", outcome.index)
                    if self._sample_log is not None and log_name:
                        self._sample_log.append(
                            outcome.index, report.count, report.min_sigma,
                            report.flag.value, outcome.seconds
                        )
                    if (outcome.index + 1) % max(1, samples // 10) == 0:
                        logger.info("%d/%d samples done", outcome.index + 1, samples)
        finally:
            if self._sample_log is not None and log_name:
                self._sample_log.close()

        excluded_fraction = (samples - len(counts)) / samples
        if not counts:
            raise TooManyExcludedError("Every sample was excluded as non-transverse.")

        values = np.array(counts, dtype=float)
        mean = float(np.mean(values))
        std_error = float(np.std(values, ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
        estimate = KinematicEstimate(
            pair=(P.describe(), Q.describe()),
            samples=samples,
            clean_samples=len(counts),
            mean=mean,
            std_error=std_error,
            predicted=predicted,
            z_score=z_score(mean, std_error, predicted),
            excluded_fraction=excluded_fraction,
            master_seed=master_seed,
            count_histogram=dict(Counter(counts)),
            volumes=(float(volumes[0]), float(volumes[1])),
            oracle_disagreements=disagreements if check_oracle else None
        )
        if excluded_fraction > self._max_excluded_fraction:
            raise TooManyExcludedError(
                f"{excluded_fraction:.2%} of samples excluded "
                f"(limit {self._max_excluded_fraction:.2%}).",
                estimate=estimate
            )
        logger.info("Monte Carlo result: %s", estimate)
        return estimate

    def sigma_constancy_test(self, n: int, pairs: int, draws: int,
                             master_seed: int) -> SigmaConstancyReport:
        """
        Estimate sigma(p, q) = E_k[sigma_angle(A, kB)] over the stabilizer of
        a common base point, for `pairs` random Lagrangian plane pairs (A, B).

        Raises: ValidationError if pairs < 3 or draws < 1000
        """
        if pairs < MIN_PAIRS or draws < MIN_DRAWS:
            raise ValidationError(
                f"Sigma test needs >= {MIN_PAIRS} configurations and >= {MIN_DRAWS} draws."
            )
        means, std_errors = [], []
        for configuration in range(pairs):
            rng = derive_stream(master_seed, configuration, CONFIGURATION_DOMAIN).generator()
            base, plane_a, plane_b = self._random_configuration(n, rng)
            # draw d of configuration c uses stream c * draws + d
            first = configuration * draws
            values = np.array([
                sigma_angle(plane_a, transform_frame(
                    stabilizer_sample(base, derive_stream(master_seed, first + d, STABILIZER_DOMAIN)),
                    plane_b
                ))
                for d in range(draws)
            ])
            means.append(float(np.mean(values)))
            std_errors.append(float(np.std(values, ddof=1) / math.sqrt(draws)))
            logger.info("Configuration %d: sigma = %.6f ± %.6f",
                        configuration, means[-1], std_errors[-1])

        max_pairwise_z = 0.0
        for i in range(pairs):
            for j in range(i + 1, pairs):
                spread = math.hypot(std_errors[i], std_errors[j])
                if spread > 0:
                    max_pairwise_z = max(max_pairwise_z, abs(means[i] - means[j]) / spread)

        reference, analytic_z = None, None
        if n == 1:
            # E|sin phi| for a uniform relative angle
            reference = 2.0 / math.pi
            analytic_z = max(abs(m - reference) / s for m, s in zip(means, std_errors))
        return SigmaConstancyReport(
            n=n, draws=draws, master_seed=master_seed,
            means=tuple(means), std_errors=tuple(std_errors),
            max_pairwise_z=max_pairwise_z,
            analytic_reference=reference, analytic_z=analytic_z
        )

    def cho_check(
        self,
        hamiltonian: HamiltonianSpec,
        flow_time: float,
        samples: int,
        master_seed: int,
        flow_step: float = 1e-3,
        fd_step: float = 1e-5,
        log_name: Optional[str] = None
    ) -> ChoCheckReport:
        """
        Deform L_n by the flow of H, then measure vol(P)/vol(L_n) and the
        intersection counts #(gP ∩ L_n).

        Raises:
            NumericalError: the deformed frames fail the Lagrangian test
            TooManyExcludedError: propagated from mc_estimate
        """
        n = hamiltonian.n
        clifford = ParametricLagrangian.clifford(n)
        deformed = deform_lagrangian(clifford, hamiltonian, flow_time, flow_step, fd_step)
        defect = lagrangian_defect(deformed)
        if defect > LAGRANGIAN_TOLERANCE:
            raise NumericalError(
                f"Deformed torus fails the Lagrangian test (|omega| = {defect:.2e})."
            )

        deformed_volume = volume(deformed, self._volume_grid)
        clifford_exact = clifford_volume(n)
        ratio = deformed_volume.value / clifford_exact
        _, a_n = lower_bound_and_a(n)
        estimate = self.mc_estimate(
            deformed, clifford, samples, master_seed,
            volumes=(deformed_volume.value, clifford_exact), log_name=log_name
        )
        clean_counts = sorted(estimate.count_histogram)
        report = ChoCheckReport(
            hamiltonian=hamiltonian.describe(),
            time=flow_time,
            volume=deformed_volume,
            clifford_volume=clifford_exact,
            volume_ratio=ratio,
            a_n=a_n,
            bound_satisfied=ratio >= a_n - BOUND_SLACK,
            oh_conjecture_observed=ratio >= 1.0 - BOUND_SLACK,
            min_clean_count=clean_counts[0] if clean_counts else None,
            all_counts_even=all(c % 2 == 0 for c in clean_counts),
            lagrangian_defect=defect,
            estimate=estimate
        )
        logger.info("Cho check: ratio %.6f (a_n %.6f), min count %s",
                    ratio, a_n, report.min_clean_count)
        return report

    # ==================== HELPERS ====================
    def _count_sample(self, P: ParametricLagrangian, Q: ParametricLagrangian,
                      g: UnitaryMatrix, index: int) -> IntersectionReport:
        """Count one sample; an exhausted Newton budget marks it failed."""
        try:
            return self._counter.count(P, Q, g)
        except ConvergenceBudgetExceededError as e:
            logger.warning("Sample %d: %s", index, e)
            return IntersectionReport(
                count=0, points=(), sigmas=(), min_sigma=None,
                flag=IntersectionFlag.FAILED, method=CountMethod.LEVELSET,
                diagnostics={'error': 'convergence_budget_exceeded'}
            )

    @staticmethod
    def _random_configuration(n: int, rng: np.random.Generator):
        """
        A random base point and two Lagrangian tangent planes moved onto it.
        Each plane is tangent to a randomly chosen Clifford torus or RP^n,
        at a random point, after a Haar-random unitary.
        """
        base = ProjectivePoint(haar_from_generator(n + 1, rng)[:, 0])
        planes = []
        for _ in range(2):
            if rng.integers(2) == 0:
                tangent = frame(ParametricLagrangian.clifford(n), rng.uniform(0.0, 2.0 * math.pi, n))
            else:
                tangent = frame(ParametricLagrangian.real_projective(n), rng.standard_normal(n + 1))
            moved = transform_frame(UnitaryMatrix(haar_from_generator(n + 1, rng)), tangent)
            carry = UnitaryMatrix(transport_unitary(moved.base.z, base.z))
            planes.append(transform_frame(carry, moved))
        plane_a, plane_b = planes
        return base, plane_a, plane_b
