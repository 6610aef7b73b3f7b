import numpy as np
import pytest
from scipy.linalg import expm
from scipy.optimize import minimize_scalar

from exceptions import DimensionMismatchError, StepTooLargeError, ValidationError
from geometry.constants_ledger import clifford_volume, lower_bound_and_a
from geometry.hamiltonian_flow import (
    FLOW_UNITARY_CONSTANT,
    deform_lagrangian,
    evaluate,
    flow_array,
    flow_point,
    gradient_array,
    hamiltonian_field,
    random_hermitian,
    random_quartic
)
from geometry.lagrangian_models import chart_array, lagrangian_defect, seed_params, volume
from geometry.projective_core import fs_distance, fs_distance_array, horizontal_project, symplectic_pairing
from geometry.random_unitary import derive_stream
from models import HamiltonianSpec, HamiltonianTerm, ParametricLagrangian, ProjectivePoint

CLIFFORD_2 = ParametricLagrangian.clifford(2)


def unitary_orbit(matrix, z, time, c=FLOW_UNITARY_CONSTANT):
    return ProjectivePoint(expm(1j * c * time * matrix) @ z)


# ==================== evaluate ====================
def test_evaluate_known_values(unit_vector):
    p = ProjectivePoint(unit_vector(3))
    assert evaluate(HamiltonianSpec.quadratic(np.eye(3)), p) == pytest.approx(1.0, abs=1e-15)

    corner = HamiltonianSpec.quadratic(np.diag([1.0, 0.0, 0.0]))
    assert evaluate(corner, ProjectivePoint(np.ones(3) / np.sqrt(3))) == pytest.approx(1 / 3)

    quartic = random_quartic(2, derive_stream(4, 0, 2))
    rotated = ProjectivePoint(np.exp(0.4j) * p.z)
    assert evaluate(quartic, rotated) == pytest.approx(evaluate(quartic, p), abs=1e-15)


def test_evaluate_checks_dimension():
    with pytest.raises(DimensionMismatchError):
        evaluate(HamiltonianSpec.quadratic(np.eye(2)), ProjectivePoint([1, 0, 0]))


# ==================== hamiltonian_field ====================
def test_constant_hamiltonian_has_no_field(unit_vector):
    p = ProjectivePoint(unit_vector(3))
    np.testing.assert_allclose(hamiltonian_field(HamiltonianSpec.quadratic(np.eye(3)), p), 0, atol=1e-15)


def test_field_is_horizontal_and_conserves_energy(unit_vector):
    spec = random_quartic(2, derive_stream(4, 1, 2))
    for _ in range(20):
        p = ProjectivePoint(unit_vector(3))
        field = hamiltonian_field(spec, p)
        assert abs(np.vdot(p.z, field)) < 1e-14
        assert abs(np.real(np.vdot(gradient_array(spec, p.z), field))) < 1e-8


def test_field_is_the_symplectic_dual_of_dh(rng, unit_vector):
    spec = random_quartic(2, derive_stream(4, 2, 2))
    h = 1e-6
    for _ in range(10):
        p = ProjectivePoint(unit_vector(3))
        v = horizontal_project(p, rng.standard_normal(3) + 1j * rng.standard_normal(3))
        forward = ProjectivePoint((p.z + h * v) / np.linalg.norm(p.z + h * v))
        backward = ProjectivePoint((p.z - h * v) / np.linalg.norm(p.z - h * v))
        dh = (evaluate(spec, forward) - evaluate(spec, backward)) / (2 * h)
        assert symplectic_pairing(p, hamiltonian_field(spec, p), v) == pytest.approx(-dh, abs=1e-8)


# ==================== flow_point ====================
def test_flow_constant_fits_unitary_orbit(unit_vector):
    rng = np.random.default_rng(1)
    matrix = random_hermitian(3, rng)
    z = unit_vector(3)
    end = flow_point(HamiltonianSpec.quadratic(matrix), ProjectivePoint(z), 0.2)

    fit = minimize_scalar(
        lambda c: fs_distance(end, unitary_orbit(matrix, z, 0.2, c)),
        bounds=(-3.0, 3.0), method='bounded', options={'xatol': 1e-10}
    )
    assert fit.x == pytest.approx(FLOW_UNITARY_CONSTANT, abs=1e-5)


def test_quadratic_flows_are_unitary_orbits(unit_vector):
    rng = np.random.default_rng(2)
    for _ in range(5):
        matrix = random_hermitian(3, rng)
        z = unit_vector(3)
        end = flow_point(HamiltonianSpec.quadratic(matrix), ProjectivePoint(z), 1.0, 1e-3)
        assert fs_distance(end, unitary_orbit(matrix, z, 1.0)) <= 1e-6


def test_zero_time_flow_is_the_identity(unit_vector):
    p = ProjectivePoint(unit_vector(3))
    end = flow_point(random_quartic(2, derive_stream(4, 3, 2)), p, 0.0)
    np.testing.assert_allclose(end.z, p.z, atol=1e-15)


def test_diagonal_flows_stay_on_the_clifford_torus():
    spec = HamiltonianSpec.quadratic(np.diag([0.3, -1.0, 0.7]))
    start = chart_array(CLIFFORD_2, seed_params(CLIFFORD_2, 6))
    end, _ = flow_array(spec, start, 1.0)
    np.testing.assert_allclose(np.abs(end), 1 / np.sqrt(3), atol=1e-7)


def test_energy_drift_is_small_for_small_steps():
    spec = random_quartic(2, derive_stream(4, 4, 2))
    start = chart_array(CLIFFORD_2, seed_params(CLIFFORD_2, 8))
    _, drift = flow_array(spec, start, 1.0, 1e-3)
    assert drift <= 1e-6


def test_flow_composes(unit_vector):
    spec = random_quartic(2, derive_stream(4, 5, 2))
    p = ProjectivePoint(unit_vector(3))
    halfway = flow_point(spec, p, 0.3)
    assert fs_distance(flow_point(spec, halfway, 0.3), flow_point(spec, p, 0.6)) <= 1e-7


def test_large_steps_are_rejected(unit_vector):
    p = ProjectivePoint(unit_vector(3))
    with pytest.raises(ValidationError):
        flow_point(HamiltonianSpec.quadratic(np.eye(3)), p, 1.0, 0.05)

    stiff = HamiltonianSpec.quadratic(random_hermitian(3, np.random.default_rng(5)), 200.0)
    with pytest.raises(StepTooLargeError):
        flow_point(stiff, p, 0.5, 1e-2)


# ==================== deform_lagrangian ====================
def test_zero_time_deformation_is_the_base():
    deformed = deform_lagrangian(CLIFFORD_2, random_quartic(2, derive_stream(4, 6, 2)), 0.0)
    params = seed_params(CLIFFORD_2, 5)
    np.testing.assert_allclose(chart_array(deformed, params), chart_array(CLIFFORD_2, params), atol=1e-15)


def test_quadratic_deformation_is_a_unitary_image():
    matrix = random_hermitian(3, np.random.default_rng(6))
    deformed = deform_lagrangian(CLIFFORD_2, HamiltonianSpec.quadratic(matrix), 0.5)
    params = seed_params(CLIFFORD_2, 20)
    expected = chart_array(CLIFFORD_2, params) @ expm(1j * FLOW_UNITARY_CONSTANT * 0.5 * matrix).T
    assert np.max(fs_distance_array(chart_array(deformed, params), expected)) <= 1e-6


def test_deformed_torus_is_lagrangian():
    deformed = deform_lagrangian(CLIFFORD_2, random_quartic(2, derive_stream(4, 7, 2)), 0.3)
    assert lagrangian_defect(deformed, grid=20) <= 1e-6


def test_only_tori_can_be_deformed():
    spec = HamiltonianSpec.quadratic(np.eye(3))
    with pytest.raises(ValidationError):
        deform_lagrangian(ParametricLagrangian.real_projective(2), spec, 0.1)


def test_hermitian_factors_are_required():
    with pytest.raises(ValidationError):
        HamiltonianTerm(1.0, (np.array([[0, 1], [0, 0]]),))


@pytest.mark.slow
def test_quartic_deformation_respects_the_volume_bound():
    _, a_2 = lower_bound_and_a(2)
    deformed = deform_lagrangian(CLIFFORD_2, random_quartic(2, derive_stream(4, 8, 2)), 0.3)
    assert volume(deformed, 32).value >= a_2 * clifford_volume(2) - 1e-6
