"""
Hamiltonian flows on CP^n.

H is lifted to C^(n+1) as a scale- and phase-invariant function. Its
horizontal Euclidean gradient G gives the Hamiltonian vector field
X_H = -i G, fixed by omega(X_H, v) = -dH(v). For H = z*Az the flow is the
unitary orbit [exp(i c t A) z] with c = FLOW_UNITARY_CONSTANT.
"""

import logging
import math
from typing import Tuple

import numpy as np

from exceptions import DimensionMismatchError, StepTooLargeError, ValidationError
from models import (
    HamiltonianSpec,
    HamiltonianTerm,
    LagrangianKind,
    ParametricLagrangian,
    ProjectivePoint,
    SeedStream
)

logger = logging.getLogger(__name__)

FLOW_UNITARY_CONSTANT = -2.0
DRIFT_TOLERANCE = 1e-6
MAX_STEP = 1e-2


# ==================== ARRAY KERNELS ====================
def _quadratic_form(matrix: np.ndarray, z: np.ndarray, norm2: np.ndarray):
    """Value q = z*Az/z*z and its Euclidean gradient 2(Az - qz)/z*z."""
    az = z @ matrix.T
    q = np.real(np.sum(np.conj(z) * az, axis=-1)) / norm2
    grad = 2.0 * (az - q[..., None] * z) / norm2[..., None]
    return q, grad


def evaluate_array(spec: HamiltonianSpec, z: np.ndarray) -> np.ndarray:
    """H at a batch of homogeneous vectors."""
    norm2 = np.sum(np.abs(z) ** 2, axis=-1)
    total = np.zeros(norm2.shape)
    for term in spec.terms:
        value = np.full(norm2.shape, float(term.coefficient))
        for matrix in term.factors:
            value = value * _quadratic_form(matrix, z, norm2)[0]
        total = total + value
    return total


def gradient_array(spec: HamiltonianSpec, z: np.ndarray) -> np.ndarray:
    """Horizontal Euclidean gradient of the lifted H (product rule per term)."""
    norm2 = np.sum(np.abs(z) ** 2, axis=-1)
    total = np.zeros_like(z, dtype=complex)
    for term in spec.terms:
        parts = [_quadratic_form(matrix, z, norm2) for matrix in term.factors]
        for f, (_, grad) in enumerate(parts):
            weight = np.full(norm2.shape, float(term.coefficient))
            for g, (q, _) in enumerate(parts):
                if g != f:
                    weight = weight * q
            total = total + weight[..., None] * grad
    return total


def field_array(spec: HamiltonianSpec, z: np.ndarray) -> np.ndarray:
    """X_H = -i grad_h H."""
    return -1j * gradient_array(spec, z)


def flow_array(spec: HamiltonianSpec, z: np.ndarray, time: float,
               step: float = 1e-3) -> Tuple[np.ndarray, float]:
    """
    Classical RK4 on the sphere lift, renormalizing after every step.

    Returns the endpoints and the largest energy drift |H(z_t) - H(z_0)|
    seen along the way.

    Raises: ValidationError if step is not in (0, 1e-2]
    """
    if not 0 < step <= MAX_STEP:
        raise ValidationError(f"Flow step must be in (0, {MAX_STEP}].")
    z = np.asarray(z, dtype=complex)
    z = z / np.linalg.norm(z, axis=-1, keepdims=True)
    if time == 0 or spec.is_zero:
        return z, 0.0

    steps = max(1, math.ceil(abs(time) / step - 1e-9))
    dt = time / steps
    energy = evaluate_array(spec, z)
    drift = 0.0
    for _ in range(steps):
        k1 = field_array(spec, z)
        k2 = field_array(spec, z + 0.5 * dt * k1)
        k3 = field_array(spec, z + 0.5 * dt * k2)
        k4 = field_array(spec, z + dt * k3)
        z = z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        z = z / np.linalg.norm(z, axis=-1, keepdims=True)
        drift = max(drift, float(np.max(np.abs(evaluate_array(spec, z) - energy))))
    return z, drift


def flow_array_checked(spec: HamiltonianSpec, z: np.ndarray, time: float,
                       step: float = 1e-3) -> np.ndarray:
    """
    flow_array that refuses drifting integrations.
    Raises: StepTooLargeError if the energy drift exceeds 1e-6
    """
    end, drift = flow_array(spec, z, time, step)
    if drift > DRIFT_TOLERANCE:
        raise StepTooLargeError(
            f"Energy drift {drift:.2e} exceeds {DRIFT_TOLERANCE:.0e}; "
            f"reduce the flow step (h = {step:g})."
        )
    logger.debug("Flowed %d points to T=%g (drift %.2e)", end[..., 0].size, time, drift)
    return end


# ==================== DOMAIN OPERATIONS ====================
def _check_dimension(spec: HamiltonianSpec, p: ProjectivePoint):
    """Raises DimensionMismatchError when H and p disagree on n."""
    if spec.n != p.n:
        raise DimensionMismatchError(
            f"Hamiltonian on CP^{spec.n} evaluated at a point of CP^{p.n}."
        )


def evaluate(spec: HamiltonianSpec, p: ProjectivePoint) -> float:
    """
    Value of H at p (gauge invariant).
    Raises: DimensionMismatchError
    """
    _check_dimension(spec, p)
    return float(evaluate_array(spec, p.z))


def hamiltonian_field(spec: HamiltonianSpec, p: ProjectivePoint) -> np.ndarray:
    """
    Horizontal lift of X_H at p.
    Raises: DimensionMismatchError
    """
    _check_dimension(spec, p)
    return field_array(spec, p.z)


def flow_point(spec: HamiltonianSpec, p: ProjectivePoint, time: float,
               step: float = 1e-3) -> ProjectivePoint:
    """
    Time-T map of the Hamiltonian isotopy generated by H.
    Raises: StepTooLargeError, ValidationError
    """
    _check_dimension(spec, p)
    return ProjectivePoint(flow_array_checked(spec, p.z, time, step))


def deform_lagrangian(base: ParametricLagrangian, spec: HamiltonianSpec, time: float,
                      flow_step: float = 1e-3, fd_step: float = 1e-5) -> ParametricLagrangian:
    """
    The Hamiltonian image phi_T(base) as a Deformed model.
    Raises: ValidationError if base is not a Clifford-rooted torus
    """
    if base.root.kind is not LagrangianKind.CLIFFORD:
        raise ValidationError("Only the Clifford torus and its images can be deformed.")
    return ParametricLagrangian(
        LagrangianKind.DEFORMED,
        base.n,
        base=base,
        hamiltonian=spec,
        time=float(time),
        flow_step=flow_step,
        fd_step=fd_step
    )


def random_hermitian(m: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix of unit Frobenius norm with Gaussian entries."""
    x = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    a = (x + x.conj().T) / 2.0
    return a / np.linalg.norm(a)


def random_quartic(n: int, stream: SeedStream, max_coefficient: float = 0.2) -> HamiltonianSpec:
    """
    H = c (z*Az)(z*Bz)/|z|^4 with random Hermitian A, B and
    max_coefficient/4 <= |c| <= max_coefficient.
    """
    rng = stream.generator()
    a = random_hermitian(n + 1, rng)
    b = random_hermitian(n + 1, rng)
    magnitude = max_coefficient * rng.uniform(0.25, 1.0)
    sign = 1.0 if rng.random() < 0.5 else -1.0
    return HamiltonianSpec(n, (HamiltonianTerm(sign * magnitude, (a, b)),))
