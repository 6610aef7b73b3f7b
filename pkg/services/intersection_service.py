"""
Intersection counting service.
Counts the transverse points of gP ∩ Q by grid-seeded damped Gauss-Newton,
either on the chordal gap between two charts (parametric) or on the
defining equations of Q (level set), and by linear algebra for RP^n pairs.
"""

import logging
from collections import Counter
from typing import Callable, List, Optional, Tuple

import numpy as np

from exceptions import (
    ConvergenceBudgetExceededError,
    DegenerateFrameError,
    DegenerateSpectrumError,
    DimensionMismatchError,
    ValidationError
)
from geometry.lagrangian_models import (
    chart_jet,
    frame_array,
    level_set_frame,
    residual_array,
    residual_jacobian,
    seed_params,
    sphere_complement
)
from geometry.projective_core import (
    fs_distance_array,
    gauge_fix_array,
    hermitian,
    project_frames,
    wedge_volume
)
from models import (
    CounterSettings,
    CountMethod,
    IntersectionFlag,
    IntersectionReport,
    LagrangianKind,
    LevelSetResidual,
    ParametricLagrangian,
    ProjectivePoint,
    UnitaryMatrix,
    real_coordinates
)

logger = logging.getLogger(__name__)

ACTIVE, CONVERGED, STALLED, BUDGET = 0, 1, 2, 3
NEAR_ZERO_STALL = 1e-10
PINV_RCOND = 1e-12
SPECTRAL_GAP = 1e-8
REALITY_TOLERANCE = 1e-8
POINT_MATCH_RADIUS = 1e-6

# residual function of a batch: x (N, d) -> (r (N, p), jacobian (N, p, d))
System = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def plane_sigma(z_a: np.ndarray, frame_a: np.ndarray,
                z_b: np.ndarray, frame_b: np.ndarray) -> float:
    """
    sigma_angle of two tangent planes whose base points agree up to the
    accuracy of a root finder; b is phase-aligned and re-projected at z_a.
    A numerically dependent frame gives 0.
    """
    mu = hermitian(z_a, z_b)
    mu = mu / abs(mu)
    try:
        return wedge_volume(project_frames(z_a, frame_a), project_frames(z_a, mu * frame_b))
    except DegenerateFrameError:
        return 0.0


def same_point_sets(first: IntersectionReport, second: IntersectionReport,
                    radius: float = POINT_MATCH_RADIUS) -> bool:
    """Equal counts and a point of `second` within `radius` of every point of `first`."""
    if first.count != second.count:
        return False
    if first.count == 0:
        return True
    others = np.array([p.z for p in second.points])
    return all(np.min(fs_distance_array(others, p.z)) < radius for p in first.points)


def product_seeds(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """All pairs (a, b) of two seed lists, as concatenated rows."""
    return np.concatenate([
        np.repeat(first, len(second), axis=0),
        np.tile(second, (len(first), 1))
    ], axis=1)


class IntersectionService:
    """
    Service counting #(gP ∩ Q).
    Reports are a deterministic function of (P, Q, g, settings): seeds are
    processed as one batch and deduplicated in a sorted post-pass.
    """

    def __init__(self, settings: Optional[CounterSettings] = None):
        """
        Initialize service with counter tolerances and seed grids.
        """
        self._settings = settings or CounterSettings()

    @property
    def settings(self) -> CounterSettings:
        """Tolerances in use."""
        return self._settings

    # ==================== PUBLIC OPERATIONS ====================
    def count(self, P: ParametricLagrangian, Q: ParametricLagrangian,
              g: UnitaryMatrix) -> IntersectionReport:
        """
        Count gP ∩ Q with the fastest applicable method: the level-set
        path whenever Q has defining equations, the parametric path
        otherwise.
        """
        target = Q.level_set
        if target is not None:
            return self.count_levelset(P, target, g)
        return self.count_parametric(P, Q, g)

    def count_parametric(self, P: ParametricLagrangian, Q: ParametricLagrangian,
                         g: UnitaryMatrix, grid: Optional[int] = None) -> IntersectionReport:
        """
        Minimize chordal_gap(g P.chart(theta), Q.chart(phi)) from every node
        of a seed grid and count the distinct zeros.

        Raises:
            DimensionMismatchError: P, Q and g disagree on n
            ValidationError: grid below 12 per axis
            ConvergenceBudgetExceededError: every seed ran out of iterations
        """
        self._check_dimensions(P.n, Q.n, g)
        grid = grid or self._settings.parametric_grid_for(P.n)
        if grid < 12:
            raise ValidationError("Parametric seed grid must be >= 12 per axis.")

        split = P.param_dim
        seeds = product_seeds(seed_params(P, grid), seed_params(Q, grid))
        x, status, iterations = self._solve(
            self._parametric_system(P, Q, g), seeds, self._settings.gap_tolerance
        )
        diagnostics = self._diagnostics(grid, status, iterations)

        accepted = x[status == CONVERGED]
        theta, phi = accepted[:, :split], accepted[:, split:]
        zp, frames_p = frame_array(P, theta)
        zp, frames_p = g.apply(zp), g.apply(frames_p)
        zq, frames_q = frame_array(Q, phi)

        def sigma(i: int) -> float:
            return plane_sigma(zp[i], frames_p[i], zq[i], frames_q[i])

        return self._report(zp, sigma, CountMethod.PARAMETRIC, diagnostics)

    def count_levelset(self, P: ParametricLagrangian, target: LevelSetResidual,
                       g: UnitaryMatrix, grid: Optional[int] = None) -> IntersectionReport:
        """
        Solve residual_target(g P.chart(theta)) = 0 in the chart parameters
        of P. Points are reported in gP ∩ target.

        Raises:
            DimensionMismatchError: P, target and g disagree on n
            ConvergenceBudgetExceededError: every seed ran out of iterations
        """
        self._check_dimensions(P.n, target.n, g)
        if grid is None:
            deformed = self._is_deformed(P)
            grid = self._settings.deformed_grid if deformed else self._settings.levelset_grid

        seeds = seed_params(P, grid)
        tolerance = self._settings.residual_tolerance ** 2
        x, status, iterations = self._solve(self._levelset_system(P, target, g), seeds, tolerance)
        diagnostics = self._diagnostics(grid, status, iterations)

        zp, frames_p = frame_array(P, x[status == CONVERGED])
        zp, frames_p = g.apply(zp), g.apply(frames_p)

        def sigma(i: int) -> float:
            tangent = level_set_frame(target, ProjectivePoint(zp[i]))
            return plane_sigma(zp[i], frames_p[i], tangent.base.z, tangent.vectors)

        return self._report(zp, sigma, CountMethod.LEVELSET, diagnostics)

    def rp_eigen_oracle(self, g: UnitaryMatrix) -> IntersectionReport:
        """
        gRP^n ∩ RP^n from the eigenvectors of the symmetric unitary M = g^T g.

        Each simple eigenvector v is rotated real, and [g v] is emitted.
        A spectral gap below 1e-8 produces a failed report (the sample is
        excluded from statistics).
        """
        try:
            vectors = self._real_eigenvectors(g)
        except DegenerateSpectrumError as e:
            logger.warning("Eigen oracle: %s", e)
            return IntersectionReport(
                count=0, points=(), sigmas=(), min_sigma=None,
                flag=IntersectionFlag.FAILED, method=CountMethod.EIGEN_ORACLE,
                diagnostics={'error': 'degenerate_spectrum', 'detail': str(e)}
            )

        images = g.apply(vectors.astype(complex))
        fixed = gauge_fix_array(images)
        order = np.lexsort(real_coordinates(fixed).T[::-1])
        points, sigmas = [], []
        for i in order:
            y = np.real(fixed[i])
            y = y / np.linalg.norm(y)
            moved = g.apply(sphere_complement(vectors[i]).astype(complex))
            sigmas.append(plane_sigma(images[i], moved, y.astype(complex), sphere_complement(y)))
            points.append(ProjectivePoint(fixed[i]))

        min_sigma = min(sigmas)
        flag = (IntersectionFlag.NEAR_DEGENERATE if min_sigma < self._settings.sigma_min
                else IntersectionFlag.CLEAN)
        return IntersectionReport(
            count=len(points), points=tuple(points), sigmas=tuple(sigmas),
            min_sigma=min_sigma, flag=flag, method=CountMethod.EIGEN_ORACLE,
            diagnostics={'eigenvectors': len(points)}
        )

    # ==================== SYSTEMS ====================
    @staticmethod
    def _parametric_system(P: ParametricLagrangian, Q: ParametricLagrangian,
                           g: UnitaryMatrix) -> System:
        """
        Real residual of w = zq - <zq, zp> zp over (theta, phi), with
        dw/dphi = dq - <dq, zp> zp and
        dw/dtheta = -<zq, dp> zp - <zq, zp> dp.
        """
        split = P.param_dim

        def system(x: np.ndarray):
            zp, dp = chart_jet(P, x[:, :split])
            zp, dp = g.apply(zp), g.apply(dp)
            zq, dq = chart_jet(Q, x[:, split:])

            overlap = hermitian(zq, zp)
            w = zq - overlap[:, None] * zp
            base = zp[:, None, :]
            dw_q = dq - hermitian(dq, base)[..., None] * base
            dw_p = -hermitian(zq[:, None, :], dp)[..., None] * base - overlap[:, None, None] * dp
            jac = real_coordinates(np.concatenate([dw_p, dw_q], axis=1))
            return real_coordinates(w), np.swapaxes(jac, -1, -2)

        return system

    @staticmethod
    def _levelset_system(P: ParametricLagrangian, target: LevelSetResidual,
                         g: UnitaryMatrix) -> System:
        """Target residual along g P.chart and its horizontal derivative."""

        def system(theta: np.ndarray):
            z, dz = chart_jet(P, theta)
            z, dz = g.apply(z), g.apply(dz)
            return residual_array(target, z), residual_jacobian(target, z, project_frames(z, dz))

        return system

    # ==================== ROOT FINDING ====================
    def _solve(self, system: System, seeds: np.ndarray,
               tolerance: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Damped Gauss-Newton on all seeds at once.

        A step is halved (at most max_halvings times) until the objective
        |r|^2 decreases; a seed whose step cannot decrease it has stalled.
        Returns final parameters, status codes and iteration counts.
        """
        x = np.array(seeds, dtype=float)
        r, jac = system(x)
        f = np.sum(r * r, axis=-1)
        status = np.where(f <= tolerance, CONVERGED, ACTIVE)
        iterations = np.zeros(len(x), dtype=int)

        for _ in range(self._settings.max_iterations):
            active = np.flatnonzero(status == ACTIVE)
            if active.size == 0:
                break
            step = -np.einsum(
                '...ij,...j->...i', np.linalg.pinv(jac[active], rcond=PINV_RCOND), r[active]
            )
            start, f_start = x[active], f[active]
            improved = np.zeros(active.size, dtype=bool)
            pending = np.arange(active.size)
            scale = 1.0
            for _ in range(self._settings.max_halvings + 1):
                trial = start[pending] + scale * step[pending]
                trial_r, trial_jac = system(trial)
                trial_f = np.sum(trial_r * trial_r, axis=-1)
                better = trial_f < f_start[pending]
                moved = active[pending[better]]
                x[moved], r[moved], jac[moved], f[moved] = (
                    trial[better], trial_r[better], trial_jac[better], trial_f[better]
                )
                improved[pending[better]] = True
                pending = pending[~better]
                if pending.size == 0:
                    break
                scale *= 0.5

            iterations[active] += 1
            done = f[active] <= tolerance
            status[active[done]] = CONVERGED
            status[active[~done & ~improved]] = STALLED

        status[status == ACTIVE] = BUDGET
        near_zero = np.count_nonzero((status == STALLED) & (f <= NEAR_ZERO_STALL))
        if near_zero:
            logger.debug("%d seeds stalled close to a zero", near_zero)
        if np.all(status == BUDGET):
            raise ConvergenceBudgetExceededError(
                f"All {len(x)} seeds exceeded {self._settings.max_iterations} iterations."
            )
        return x, status, iterations

    # ==================== REPORTING ====================
    def _dedupe(self, z: np.ndarray) -> Tuple[np.ndarray, List[int]]:
        """
        Gauge-fix, sort lexicographically and greedily merge points closer
        than the dedupe radius. Stops one past max_points.
        """
        fixed = gauge_fix_array(z)
        order = np.lexsort(real_coordinates(fixed).T[::-1])
        kept: List[int] = []
        for i in order:
            if kept and np.min(fs_distance_array(fixed[kept], fixed[i])) < self._settings.dedupe_radius:
                continue
            kept.append(int(i))
            if len(kept) > self._settings.max_points:
                break
        return fixed, kept

    def _report(self, z: np.ndarray, sigma: Callable[[int], float], method: CountMethod,
                diagnostics: dict) -> IntersectionReport:
        """Deduplicate converged points, attach sigma values and the flag."""
        if len(z) == 0:
            return IntersectionReport(
                count=0, points=(), sigmas=(), min_sigma=None,
                flag=IntersectionFlag.CLEAN, method=method, diagnostics=diagnostics
            )

        fixed, kept = self._dedupe(z)
        if len(kept) > self._settings.max_points:
            diagnostics['distinct_points'] = f"> {self._settings.max_points}"
            logger.warning("More than %d distinct points: not transverse", self._settings.max_points)
            return IntersectionReport(
                count=0, points=(), sigmas=(), min_sigma=None,
                flag=IntersectionFlag.FAILED, method=method, diagnostics=diagnostics
            )

        points = tuple(ProjectivePoint(fixed[i]) for i in kept)
        sigmas = tuple(sigma(i) for i in kept)
        min_sigma = min(sigmas)
        flag = IntersectionFlag.CLEAN
        if min_sigma < self._settings.sigma_min:
            flag = IntersectionFlag.NEAR_DEGENERATE
        return IntersectionReport(
            count=len(points), points=points, sigmas=sigmas, min_sigma=min_sigma,
            flag=flag, method=method, diagnostics=diagnostics
        )

    @staticmethod
    def _diagnostics(grid: int, status: np.ndarray, iterations: np.ndarray) -> dict:
        """Seed statistics recorded with every report."""
        histogram = Counter(int(k) for k in iterations)
        return {
            'grid': grid,
            'seeds': int(status.size),
            'converged': int(np.count_nonzero(status == CONVERGED)),
            'stalled': int(np.count_nonzero(status == STALLED)),
            'budget_exceeded': int(np.count_nonzero(status == BUDGET)),
            'iterations': {str(k): v for k, v in sorted(histogram.items())}
        }

    # ==================== HELPERS ====================
    @staticmethod
    def _check_dimensions(n_p: int, n_q: int, g: UnitaryMatrix):
        """Raises DimensionMismatchError unless both sides live in CP^n with g of size n+1."""
        if n_p != n_q or g.dimension != n_p + 1:
            raise DimensionMismatchError(
                f"Cannot intersect in CP^{n_p} and CP^{n_q} with a {g.dimension}x{g.dimension} g."
            )

    @staticmethod
    def _is_deformed(model: ParametricLagrangian) -> bool:
        """True if a Hamiltonian flow appears anywhere in the model chain."""
        while model is not None:
            if model.kind is LagrangianKind.DEFORMED:
                return True
            model = model.base
        return False

    @staticmethod
    def _real_eigenvectors(g: UnitaryMatrix) -> np.ndarray:
        """
        Real unit eigenvectors of g^T g.
        Raises: DegenerateSpectrumError for a gap below 1e-8 or a vector
            that cannot be rotated real within 1e-8
        """
        m = g.dimension
        values, vectors = np.linalg.eig(g.entries.T @ g.entries)
        gaps = np.abs(values[:, None] - values[None, :]) + np.eye(m) * 2.0
        if np.min(gaps) < SPECTRAL_GAP:
            raise DegenerateSpectrumError(f"Eigenvalue gap {np.min(gaps):.2e} below {SPECTRAL_GAP:g}.")

        real = np.empty((m, m))
        for k in range(m):
            v = vectors[:, k] / np.linalg.norm(vectors[:, k])
            alpha = -0.5 * np.angle(np.sum(v * v))
            rotated = np.exp(1j * alpha) * v
            if np.linalg.norm(rotated - np.conj(rotated)) > REALITY_TOLERANCE:
                raise DegenerateSpectrumError("Eigenvector cannot be rotated real.")
            real[k] = np.real(rotated) / np.linalg.norm(np.real(rotated))
        return real
