"""
Experiment service layer.
Single-shot experiments behind the constants, volume, intersect and
deform commands; Monte Carlo experiments live in KinematicService.
"""

import logging
from typing import List, Optional

from exceptions import ValidationError
from geometry.constants_ledger import clifford_volume, constants_table, rp_volume
from geometry.hamiltonian_flow import deform_lagrangian, flow_array
from geometry.lagrangian_models import chart_array, lagrangian_defect, seed_params, volume
from geometry.random_unitary import derive_stream, haar_unitary, to_special
from models import (
    ConstantsRow,
    HamiltonianSpec,
    IntersectionReport,
    ParametricLagrangian,
    UnitaryMatrix
)
from services.intersection_service import IntersectionService, same_point_sets

logger = logging.getLogger(__name__)

INTERSECT_DOMAIN = 4
MODEL_NAMES = ('clifford', 'rp')
DRIFT_GRID = 16


def build_model(name: str, n: int) -> ParametricLagrangian:
    """
    Root model from its command-line name.
    Raises: ValidationError for an unknown name
    """
    if name == 'clifford':
        return ParametricLagrangian.clifford(n)
    if name == 'rp':
        return ParametricLagrangian.real_projective(n)
    raise ValidationError(f"Unknown model '{name}'; expected one of: {', '.join(MODEL_NAMES)}.")


def closed_form_volume(model: ParametricLagrangian) -> float:
    """vol(L_n) for torus models, vol(RP^n) otherwise (exact for unitary images)."""
    return clifford_volume(model.n) if model.is_torus else rp_volume(model.n)


class ExperimentService:
    """
    Service for the single-shot experiments.
    """

    def __init__(self, counter: IntersectionService):
        """
        Initialize service with the intersection counter.
        """
        self._counter = counter

    def constants(self, n_max: int) -> List[ConstantsRow]:
        """Ledger rows for n = 1..n_max."""
        rows = constants_table(n_max)
        logger.info("Computed constants for n = 1..%d", n_max)
        return rows

    def volume(self, model_name: str, n: int, grid: int = 0) -> dict:
        """
        Quadrature volume of a root model against its closed form.
        Raises: ValidationError for unknown models or bad grids
        """
        model = build_model(model_name, n)
        estimate = volume(model, grid)
        exact = closed_form_volume(model)
        return {
            'model': model.describe(),
            'volume': estimate.to_record(),
            'closed_form': exact,
            'relative_error': abs(estimate.value - exact) / exact
        }

    @staticmethod
    def random_unitary(n: int, master_seed: int) -> UnitaryMatrix:
        """The Haar-random g in SU(n+1) used by the intersect command."""
        return to_special(haar_unitary(n + 1, derive_stream(master_seed, 0, INTERSECT_DOMAIN)))

    def intersect(self, n: int, pair: tuple, g: UnitaryMatrix, method: str = 'auto') -> dict:
        """
        Count gP ∩ Q for one g with the requested method.

        Args:
            n: projective dimension
            pair: names of P and Q
            g: the unitary moving P
            method: auto, parametric, levelset or oracle (RP^n pairs only)

        Raises:
            ValidationError: oracle requested for a pair that is not rp:rp
            DimensionMismatchError: g does not act on C^(n+1)
        """
        P, Q = build_model(pair[0], n), build_model(pair[1], n)
        if method == 'oracle':
            if pair != ('rp', 'rp'):
                raise ValidationError("The eigen oracle only counts rp:rp pairs.")
            report = self._counter.rp_eigen_oracle(g)
        elif method == 'parametric':
            report = self._counter.count_parametric(P, Q, g)
        elif method == 'levelset':
            report = self._counter.count_levelset(P, Q.level_set, g)
        else:
            report = self._counter.count(P, Q, g)

        record = {
            'pair': [P.describe(), Q.describe()],
            'g': g.describe(),
            'intersection': report.to_record()
        }
        if pair == ('rp', 'rp') and method != 'oracle':
            oracle = self._counter.rp_eigen_oracle(g)
            record['oracle'] = oracle.to_record()
            record['oracle_agrees'] = self._agrees(report, oracle)
        logger.info("Intersection %s:%s -> %s", pair[0], pair[1], report)
        return record

    def deform(self, hamiltonian: HamiltonianSpec, flow_time: float, flow_step: float = 1e-3,
               fd_step: float = 1e-5, grid: int = 0) -> dict:
        """
        Deform L_n by the flow of H and describe the result: descriptor,
        volume, Lagrangian defect and energy drift of the flow.
        """
        n = hamiltonian.n
        clifford = ParametricLagrangian.clifford(n)
        model = deform_lagrangian(clifford, hamiltonian, flow_time, flow_step, fd_step)
        estimate = volume(model, grid)
        defect = lagrangian_defect(model)
        start = chart_array(clifford, seed_params(clifford, DRIFT_GRID))
        _, drift = flow_array(hamiltonian, start, flow_time, flow_step)
        exact = clifford_volume(n)
        return {
            'model': model.describe(),
            'volume': estimate.to_record(),
            'clifford_volume': exact,
            'volume_ratio': estimate.value / exact,
            # quadratic H flows by unitaries, so the ratio must be 1
            'unitary_orbit': hamiltonian.is_quadratic,
            'lagrangian_defect': defect,
            'energy_drift': drift
        }

    @staticmethod
    def _agrees(report: IntersectionReport, oracle: IntersectionReport) -> Optional[bool]:
        """Point-set agreement of two clean reports (None if either is flagged)."""
        if not (report.is_clean and oracle.is_clean):
            return None
        return same_point_sets(report, oracle)
