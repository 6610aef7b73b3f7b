import numpy as np
import pytest

from exceptions import NotUnitError, ValidationError
from geometry.constants_ledger import clifford_volume
from geometry.lagrangian_models import (
    chart,
    chart_array,
    clifford_chart,
    frame,
    lagrangian_defect,
    level_set_frame,
    membership_residual,
    residual_array,
    rp_chart,
    seed_params,
    volume
)
from geometry.projective_core import fs_distance, horizontal_project, symplectic_pairing
from geometry.random_unitary import derive_stream, haar_unitary
from models import LevelSetResidual, ParametricLagrangian, ProjectivePoint, ResidualKind

CLIFFORD_2 = ParametricLagrangian.clifford(2)
RP_2 = ParametricLagrangian.real_projective(2)


# ==================== charts ====================
def test_clifford_chart_known_values():
    np.testing.assert_allclose(clifford_chart([0, 0]).z, np.ones(3) / np.sqrt(3), atol=1e-15)
    np.testing.assert_allclose(clifford_chart([np.pi, 0]).z, np.array([-1, 1, 1]) / np.sqrt(3), atol=1e-15)


def test_clifford_chart_lies_on_the_torus(rng):
    target = LevelSetResidual(ResidualKind.CLIFFORD, 2)
    theta = rng.uniform(0, 2 * np.pi, (1000, 2))
    residual = residual_array(target, chart_array(CLIFFORD_2, theta))
    assert np.max(np.abs(residual)) <= 1e-10


def test_rp_chart_known_values(rng):
    np.testing.assert_array_equal(rp_chart([1, 0, 0]).z, [1, 0, 0])
    x = rng.standard_normal(3)
    x /= np.linalg.norm(x)
    assert fs_distance(rp_chart(x), rp_chart(-x)) < 1e-14
    target = LevelSetResidual(ResidualKind.REAL_PROJECTIVE, 2)
    assert np.max(np.abs(membership_residual(target, rp_chart(x)))) <= 1e-10


def test_rp_chart_needs_a_real_unit_vector():
    with pytest.raises(NotUnitError):
        rp_chart([1, 1, 0])
    with pytest.raises(NotUnitError):
        rp_chart([1j, 0, 0])


# ==================== residuals ====================
def test_membership_residual_known_values():
    clifford = LevelSetResidual(ResidualKind.CLIFFORD, 2)
    np.testing.assert_allclose(
        membership_residual(clifford, ProjectivePoint(np.ones(3) / np.sqrt(3))), [0, 0], atol=1e-15
    )
    np.testing.assert_allclose(membership_residual(clifford, ProjectivePoint([1, 0, 0])), [1, 0])

    real = LevelSetResidual(ResidualKind.REAL_PROJECTIVE, 2)
    point = ProjectivePoint(np.array([1, 1j, 0]) / np.sqrt(2))
    np.testing.assert_allclose(np.abs(membership_residual(real, point)), [0.5, 0, 0], atol=1e-15)


def test_membership_residual_is_gauge_invariant(unit_vector):
    target = LevelSetResidual(ResidualKind.REAL_PROJECTIVE, 2)
    z = unit_vector(3)
    np.testing.assert_allclose(
        membership_residual(target, ProjectivePoint(z)),
        membership_residual(target, ProjectivePoint(np.exp(1.3j) * z)),
        atol=1e-15
    )


def test_membership_residual_checks_dimension():
    with pytest.raises(ValidationError):
        membership_residual(LevelSetResidual(ResidualKind.CLIFFORD, 1), ProjectivePoint([1, 0, 0]))


# ==================== frames ====================
def test_clifford_frame_at_origin():
    tangent = frame(CLIFFORD_2, [0, 0])
    base = tangent.base
    for k in range(2):
        expected = horizontal_project(base, 1j * np.eye(3)[k] / np.sqrt(3))
        np.testing.assert_allclose(tangent.vectors[k], expected, atol=1e-15)


def test_unitary_image_frame_is_the_moved_frame():
    g = haar_unitary(3, derive_stream(3, 1))
    image = ParametricLagrangian.unitary_image(CLIFFORD_2, g)
    theta = [0.4, 2.2]
    moved = frame(image, theta)
    original = frame(CLIFFORD_2, theta)
    np.testing.assert_allclose(moved.base.z, g.apply(original.base.z), atol=1e-14)
    np.testing.assert_allclose(moved.vectors, g.apply(original.vectors), atol=1e-14)


@pytest.mark.parametrize("model", [
    ParametricLagrangian.clifford(1),
    CLIFFORD_2,
    RP_2,
    ParametricLagrangian.unitary_image(RP_2, haar_unitary(3, derive_stream(8, 0))),
])
def test_root_models_are_lagrangian(model):
    assert lagrangian_defect(model, grid=10) <= 1e-12


def test_frames_pass_the_pairing_check(rng):
    for theta in rng.uniform(0, 2 * np.pi, (10, 2)):
        tangent = frame(CLIFFORD_2, theta)
        u, v = tangent.vectors
        assert abs(symplectic_pairing(tangent.base, u, v)) <= 1e-6


def test_level_set_frames_are_tangent_to_the_target():
    clifford = LevelSetResidual(ResidualKind.CLIFFORD, 2)
    point = chart(CLIFFORD_2, [1.0, -0.5])
    tangent = level_set_frame(clifford, point)
    assert tangent.rank == 2
    for u in tangent.vectors:
        shifted = point.z + 1e-6 * u
        assert np.max(np.abs(residual_array(clifford, shifted))) < 1e-10


def test_seed_params_shapes():
    assert seed_params(CLIFFORD_2, 12).shape == (144, 2)
    sphere = seed_params(RP_2, 12)
    assert sphere.shape == (144, 3)
    np.testing.assert_allclose(np.linalg.norm(sphere, axis=-1), 1.0, atol=1e-14)


# ==================== volume ====================
def test_clifford_circle_volume():
    assert volume(ParametricLagrangian.clifford(1)).value == pytest.approx(np.pi, abs=1e-10)


def test_clifford_torus_volume():
    estimate = volume(CLIFFORD_2)
    exact = 4 * np.pi ** 2 / (3 * np.sqrt(3))
    assert estimate.value == pytest.approx(exact, rel=1e-8)
    assert estimate.integrand_spread <= 1e-12


def test_real_projective_plane_volume():
    estimate = volume(RP_2)
    assert estimate.value == pytest.approx(2 * np.pi, abs=1e-6)
    assert estimate.richardson_gauge < 1e-3


def test_volume_is_unitary_invariant():
    for index in range(10):
        g = haar_unitary(3, derive_stream(21, index))
        image = ParametricLagrangian.unitary_image(CLIFFORD_2, g)
        assert volume(image, 16).value == pytest.approx(clifford_volume(2), rel=1e-8)


@pytest.mark.parametrize("grid", [6, 9])
def test_volume_rejects_bad_grids(grid):
    with pytest.raises(ValidationError):
        volume(CLIFFORD_2, grid)
