"""
Concrete Lagrangian submanifolds of CP^n.

Torus models (Clifford and its unitary or Hamiltonian images) are
parametrized by theta in T^n = [0, 2pi)^n through the chart
(e^{i theta_1}, ..., e^{i theta_n}, 1)/sqrt(n+1). RealProjective models are
parametrized by ambient x in R^(n+1) (normalized inside the chart), and
integrated over S^n in spherical product angles.
"""

import logging
from typing import Tuple

import numpy as np

from exceptions import DegenerateFrameError, NotUnitError, ValidationError
from geometry.hamiltonian_flow import flow_array_checked
from geometry.projective_core import (
    gauge_fix_array,
    gram_sqrt_det,
    omega_array,
    project_frames
)
from models import (
    HorizontalFrame,
    LagrangianKind,
    LevelSetResidual,
    ParametricLagrangian,
    ProjectivePoint,
    ResidualKind,
    VolumeEstimate
)

logger = logging.getLogger(__name__)

FRAME_GRAM_TOLERANCE = 1e-10
UNIT_TOLERANCE = 1e-12
TWO_PI = 2.0 * np.pi


# ==================== ROOT CHARTS ====================
def clifford_jet(theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Clifford chart and its partial derivatives (..., n, n+1)."""
    theta = np.asarray(theta, dtype=float)
    n = theta.shape[-1]
    scale = 1.0 / np.sqrt(n + 1)
    phases = np.exp(1j * theta)
    ones = np.ones(theta.shape[:-1] + (1,), dtype=complex)
    z = np.concatenate([phases, ones], axis=-1) * scale

    dz = np.zeros(theta.shape[:-1] + (n, n + 1), dtype=complex)
    for k in range(n):
        dz[..., k, k] = 1j * phases[..., k] * scale
    return z, dz


def rp_jet(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """x/|x| and its derivatives along the n+1 ambient directions."""
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    radius = np.linalg.norm(x, axis=-1, keepdims=True)
    unit = x / radius
    dz = (np.eye(m) - unit[..., :, None] * unit[..., None, :]) / radius[..., None]
    return unit.astype(complex), dz.astype(complex)


def sphere_complement(x: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis of the tangent space of S^n at unit x, from the
    Householder reflection sending x to a multiple of e_1.
    """
    x = np.asarray(x, dtype=float)
    m = x.shape[-1]
    sign = np.where(x[..., :1] >= 0, 1.0, -1.0)
    v = x.copy()
    v[..., :1] += sign
    reflection = np.eye(m) - 2.0 * v[..., :, None] * v[..., None, :] / np.sum(v * v, axis=-1)[..., None, None]
    return np.swapaxes(reflection[..., :, 1:], -1, -2)


def sphere_angle_jet(phi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Spherical product angles (phi_1..phi_{n-1} in [0, pi], phi_n in [0, 2pi))
    to points of S^n, with the derivatives along each angle.
    """
    phi = np.asarray(phi, dtype=float)
    n = phi.shape[-1]
    s, c = np.sin(phi), np.cos(phi)

    def coordinate(j, swapped=None):
        # x_j = (prod_{i<j} sin phi_i) * cos phi_j, with x_n the full sine product;
        # `swapped` replaces one factor sin phi_k by its derivative cos phi_k
        value = np.ones(phi.shape[:-1])
        for i in range(min(j, n)):
            value = value * (c[..., i] if i == swapped else s[..., i])
        if j < n:
            value = value * c[..., j]
        return value

    x = np.stack([coordinate(j) for j in range(n + 1)], axis=-1)
    dx = np.zeros(phi.shape[:-1] + (n, n + 1))
    for k in range(n):
        for j in range(k, n + 1):
            if j == k:
                prefix = np.ones(phi.shape[:-1])
                for i in range(j):
                    prefix = prefix * s[..., i]
                dx[..., k, j] = -prefix * s[..., j]
            else:
                dx[..., k, j] = coordinate(j, swapped=k)
    return x, dx


def clifford_chart(theta) -> ProjectivePoint:
    """Point of the Clifford torus L_n with angles theta."""
    z, _ = clifford_jet(np.atleast_1d(np.asarray(theta, dtype=float)))
    return ProjectivePoint(z)


def rp_chart(x) -> ProjectivePoint:
    """
    The real point [x] of RP^n for a unit real vector x.
    Raises: NotUnitError if x is complex or not of unit length
    """
    x = np.asarray(x)
    if np.iscomplexobj(x) and np.any(np.imag(x) != 0):
        raise NotUnitError("RP^n chart needs a real vector.")
    x = np.real(x).astype(float)
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOLERANCE:
        raise NotUnitError("RP^n chart needs a unit vector.")
    return ProjectivePoint(x.astype(complex))


# ==================== MODEL DISPATCH ====================
def chart_array(model: ParametricLagrangian, params: np.ndarray) -> np.ndarray:
    """Unit representatives of chart points for a batch of parameters."""
    params = np.asarray(params, dtype=float)
    if model.kind is LagrangianKind.CLIFFORD:
        return clifford_jet(params)[0]
    if model.kind is LagrangianKind.REAL_PROJECTIVE:
        return rp_jet(params)[0]
    if model.kind is LagrangianKind.UNITARY_IMAGE:
        return model.unitary.apply(chart_array(model.base, params))
    return flow_array_checked(
        model.hamiltonian, chart_array(model.base, params), model.time, model.flow_step
    )


def chart_jet(model: ParametricLagrangian, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Chart points and raw partial derivatives along every parameter,
    shaped (..., m) and (..., param_dim, m). Deformed models use central
    differences of the flowed chart with step model.fd_step.
    """
    params = np.asarray(params, dtype=float)
    if model.kind is LagrangianKind.CLIFFORD:
        return clifford_jet(params)
    if model.kind is LagrangianKind.REAL_PROJECTIVE:
        return rp_jet(params)
    if model.kind is LagrangianKind.UNITARY_IMAGE:
        z, dz = chart_jet(model.base, params)
        return model.unitary.apply(z), model.unitary.apply(dz)

    dim = model.param_dim
    h = model.fd_step
    offsets = np.concatenate([np.zeros((1, dim)), h * np.eye(dim), -h * np.eye(dim)])
    shifted = params[None, ...] + offsets.reshape((2 * dim + 1,) + (1,) * (params.ndim - 1) + (dim,))
    flowed = chart_array(model, shifted)
    z = flowed[0]
    dz = (flowed[1:dim + 1] - flowed[dim + 1:]) / (2.0 * h)
    return z, np.moveaxis(dz, 0, -2)


def frame_array(model: ParametricLagrangian, params: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Chart points and n horizontal tangent vectors at each of them."""
    params = np.asarray(params, dtype=float)
    if model.kind is LagrangianKind.REAL_PROJECTIVE:
        unit = params / np.linalg.norm(params, axis=-1, keepdims=True)
        return unit.astype(complex), sphere_complement(unit).astype(complex)
    if model.kind is LagrangianKind.UNITARY_IMAGE:
        z, frames = frame_array(model.base, params)
        z = model.unitary.apply(z)
        return z, project_frames(z, model.unitary.apply(frames))
    z, dz = chart_jet(model, params)
    return z, project_frames(z, dz)


def _check_frame_gram(frames: np.ndarray):
    """Raises DegenerateFrameError when a real Gram determinant is below 1e-10."""
    volume = gram_sqrt_det(frames)
    if np.min(volume) ** 2 < FRAME_GRAM_TOLERANCE:
        raise DegenerateFrameError("Chart frame is degenerate at a parameter.")


def chart(model: ParametricLagrangian, params) -> ProjectivePoint:
    """The chart point of a model at one parameter."""
    return ProjectivePoint(chart_array(model, np.atleast_1d(np.asarray(params, dtype=float))))


def frame(model: ParametricLagrangian, params) -> HorizontalFrame:
    """
    Horizontal tangent frame of a model at one parameter.
    Raises: DegenerateFrameError if the real Gram determinant < 1e-10
    """
    z, frames = frame_array(model, np.atleast_1d(np.asarray(params, dtype=float)))
    _check_frame_gram(frames)
    return HorizontalFrame(ProjectivePoint(z), frames)


# ==================== LEVEL SETS ====================
def residual_array(target: LevelSetResidual, z: np.ndarray) -> np.ndarray:
    """Defining equations of the target, scale and phase invariant."""
    norm2 = np.sum(np.abs(z) ** 2, axis=-1, keepdims=True)
    if target.kind is ResidualKind.CLIFFORD:
        moduli = np.abs(z) ** 2 / norm2
        return moduli[..., :-1] - moduli[..., 1:]
    rows, cols = np.triu_indices(z.shape[-1], 1)
    return np.imag(z[..., rows] * np.conj(z[..., cols])) / norm2


def residual_jacobian(target: LevelSetResidual, z: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """
    Derivatives of the residual along horizontal vectors at unit z,
    shaped (..., arity, k) for frames (..., k, m).
    """
    base = z[..., None, :]
    if target.kind is ResidualKind.CLIFFORD:
        moduli = 2.0 * np.real(np.conj(base) * frames)
        jac = moduli[..., :-1] - moduli[..., 1:]
    else:
        rows, cols = np.triu_indices(z.shape[-1], 1)
        jac = np.imag(
            frames[..., rows] * np.conj(base[..., cols]) + base[..., rows] * np.conj(frames[..., cols])
        )
    return np.swapaxes(jac, -1, -2)


def membership_residual(target: LevelSetResidual, p: ProjectivePoint) -> np.ndarray:
    """Residual vector of p; zero exactly on the target submanifold."""
    if target.n != p.n:
        raise ValidationError("Residual and point live in different CP^n.")
    return residual_array(target, p.z)


def level_set_frame(target: LevelSetResidual, p: ProjectivePoint) -> HorizontalFrame:
    """Tangent frame of the target submanifold through p."""
    m = p.z.size
    if target.kind is ResidualKind.CLIFFORD:
        vectors = np.zeros((m - 1, m), dtype=complex)
        for k in range(m - 1):
            vectors[k, k] = 1j * p.z[k]
        return HorizontalFrame(p, project_frames(p.z, vectors))

    fixed = gauge_fix_array(p.z)
    x = np.real(fixed)
    x = x / np.linalg.norm(x)
    return HorizontalFrame(ProjectivePoint(x.astype(complex)), sphere_complement(x).astype(complex))


# ==================== GRIDS, VOLUME, LAGRANGIAN TEST ====================
def _product_grid(axes) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing='ij')
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _angle_axes(n: int, grid: int):
    """Cell midpoints of the spherical product-angle grid."""
    polar = (np.arange(grid) + 0.5) * np.pi / grid
    azimuth = (np.arange(grid) + 0.5) * TWO_PI / grid
    return [polar] * (n - 1) + [azimuth]


def seed_params(model: ParametricLagrangian, grid: int) -> np.ndarray:
    """Deterministic grid of Newton seeds in the model's parameter space."""
    if model.is_torus:
        axis = np.arange(grid) * TWO_PI / grid
        return _product_grid([axis] * model.n)
    x, _ = sphere_angle_jet(_product_grid(_angle_axes(model.n, grid)))
    return x


def _root_pushforward(model: ParametricLagrangian, z: np.ndarray, dz: np.ndarray):
    """Apply the unitary layers of an RP-rooted model to a root jet."""
    if model.kind is LagrangianKind.REAL_PROJECTIVE:
        return z, dz
    z, dz = _root_pushforward(model.base, z, dz)
    return model.unitary.apply(z), model.unitary.apply(dz)


def _volume_density(model: ParametricLagrangian, grid: int) -> Tuple[np.ndarray, float]:
    """Integrand samples at midpoint nodes and the cell measure."""
    if model.is_torus:
        axis = (np.arange(grid) + 0.5) * TWO_PI / grid
        _, frames = frame_array(model, _product_grid([axis] * model.n))
        _check_frame_gram(frames)
        return gram_sqrt_det(frames), (TWO_PI / grid) ** model.n

    x, dx = sphere_angle_jet(_product_grid(_angle_axes(model.n, grid)))
    z, dz = _root_pushforward(model, x.astype(complex), dx.astype(complex))
    cell = (np.pi / grid) ** (model.n - 1) * (TWO_PI / grid)
    # half of S^n covers RP^n once
    return gram_sqrt_det(project_frames(z, dz)), cell / 2.0


def volume(model: ParametricLagrangian, grid: int = 0):
    """
    Riemannian volume by the composite midpoint rule, with a Richardson
    gauge from the half grid. grid = 0 picks 64 (tori) or 256 (RP^n).

    Raises:
        ValidationError: grid below 8 or odd
        DegenerateFrameError: propagated from the chart frames
    """
    if grid == 0:
        grid = 64 if model.is_torus else 256
    if grid < 8 or grid % 2:
        raise ValidationError("Volume grid must be even and >= 8 per axis.")

    density, cell = _volume_density(model, grid)
    fine = float(np.sum(density) * cell)
    coarse_density, coarse_cell = _volume_density(model, grid // 2)
    coarse = float(np.sum(coarse_density) * coarse_cell)
    logger.info("Volume of %s on %d nodes/axis: %.12f", model, grid, fine)
    return VolumeEstimate(
        value=fine + (fine - coarse) / 3.0,
        fine=fine,
        coarse=coarse,
        richardson_gauge=abs(coarse - fine),
        integrand_spread=float(np.std(density)),
        grid=grid
    )


def lagrangian_defect(model: ParametricLagrangian, grid: int = 20) -> float:
    """Largest |omega(u_i, u_j)| over chart frames on a grid^n node set."""
    if model.is_torus:
        axis = np.arange(grid) * TWO_PI / grid
        params = _product_grid([axis] * model.n)
    else:
        params = seed_params(model, grid)
    _, frames = frame_array(model, params)
    worst = 0.0
    for i in range(model.n):
        for j in range(i + 1, model.n):
            worst = max(worst, float(np.max(np.abs(omega_array(frames[..., i, :], frames[..., j, :])))))
    return worst
