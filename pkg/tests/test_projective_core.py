import numpy as np
import pytest

from exceptions import (
    BasePointMismatchError,
    DimensionMismatchError,
    NotHorizontalError,
    ZeroVectorError
)
from geometry.projective_core import (
    chordal_gap,
    fs_distance,
    gauge_fix,
    horizontal_project,
    sigma_angle,
    symplectic_pairing,
    transform_frame
)
from geometry.random_unitary import derive_stream, haar_unitary
from models import HorizontalFrame, ProjectivePoint

E1 = ProjectivePoint([1, 0, 0])
E2 = ProjectivePoint([0, 1, 0])
MIXED = ProjectivePoint(np.array([1, 1, 0]) / np.sqrt(2))


def random_horizontal(rng, p):
    w = rng.standard_normal(p.z.size) + 1j * rng.standard_normal(p.z.size)
    return horizontal_project(p, w)


# ==================== gauge_fix ====================
@pytest.mark.parametrize("z, expected", [
    ([0, 2j, 0], [0, 1, 0]),
    ([1, 1, 1], np.ones(3) / np.sqrt(3)),
    (np.array([1j, 1j]) / np.sqrt(2), np.ones(2) / np.sqrt(2)),
])
def test_gauge_fix_known_values(z, expected):
    np.testing.assert_allclose(gauge_fix(z).z, expected, atol=1e-15)


def test_gauge_fix_is_idempotent(unit_vector):
    once = gauge_fix(unit_vector(4))
    twice = gauge_fix(once.z)
    np.testing.assert_array_equal(once.z, twice.z)


def test_gauge_fix_largest_entry_is_real_positive(unit_vector):
    fixed = gauge_fix(3.0 * unit_vector(5)).z
    k = int(np.argmax(np.abs(fixed)))
    assert fixed[k].imag == 0.0
    assert fixed[k].real > 0
    assert np.linalg.norm(fixed) == pytest.approx(1.0, abs=1e-14)


def test_gauge_fix_rejects_zero_vector():
    with pytest.raises(ZeroVectorError):
        gauge_fix([0, 1e-15, 0])


# ==================== distances ====================
def test_fs_distance_known_values():
    assert fs_distance(E1, E1) == 0.0
    assert fs_distance(E1, E2) == pytest.approx(np.pi / 2, abs=1e-15)
    assert fs_distance(E1, MIXED) == pytest.approx(np.pi / 4, abs=1e-15)


def test_chordal_gap_known_values():
    assert chordal_gap(E1, E1) == 0.0
    assert chordal_gap(E1, E2) == pytest.approx(1.0, abs=1e-15)
    assert chordal_gap(E1, MIXED) == pytest.approx(0.5, abs=1e-15)


def test_distances_reject_mixed_dimensions():
    with pytest.raises(DimensionMismatchError):
        fs_distance(E1, ProjectivePoint([1, 0]))
    with pytest.raises(DimensionMismatchError):
        chordal_gap(ProjectivePoint([0, 1]), E2)


def test_chordal_gap_is_squared_sine_of_distance(unit_vector):
    for _ in range(1000):
        p, q = ProjectivePoint(unit_vector(3)), ProjectivePoint(unit_vector(3))
        assert chordal_gap(p, q) == pytest.approx(np.sin(fs_distance(p, q)) ** 2, abs=1e-12)


def test_distances_are_gauge_and_unitary_invariant(unit_vector):
    u = haar_unitary(3, derive_stream(1, 0))
    for _ in range(50):
        p, q = ProjectivePoint(unit_vector(3)), ProjectivePoint(unit_vector(3))
        rotated = ProjectivePoint(np.exp(0.7j) * q.z)
        assert fs_distance(p, rotated) == pytest.approx(fs_distance(p, q), abs=1e-12)
        assert chordal_gap(p, rotated) == pytest.approx(chordal_gap(p, q), abs=1e-12)
        moved = fs_distance(ProjectivePoint(u.apply(p.z)), ProjectivePoint(u.apply(q.z)))
        assert moved == pytest.approx(fs_distance(p, q), abs=1e-12)


# ==================== horizontal_project ====================
def test_horizontal_project_known_values(unit_vector):
    p = ProjectivePoint(unit_vector(3))
    np.testing.assert_allclose(horizontal_project(p, p.z), 0, atol=1e-15)
    np.testing.assert_allclose(horizontal_project(p, 1j * p.z), 0, atol=1e-15)
    np.testing.assert_array_equal(horizontal_project(E1, [0, 1, 0]), [0, 1, 0])


def test_horizontal_project_is_idempotent_and_horizontal(rng, unit_vector):
    p = ProjectivePoint(unit_vector(4))
    w = random_horizontal(rng, p)
    np.testing.assert_allclose(horizontal_project(p, w), w, atol=1e-15)
    assert abs(np.vdot(p.z, w)) < 1e-15


# ==================== symplectic_pairing ====================
def test_symplectic_pairing_known_values():
    u = np.array([0, 1, 0], dtype=complex)
    assert symplectic_pairing(E1, u, u) == 0.0
    assert symplectic_pairing(E1, u, 1j * u) == pytest.approx(-1.0)
    assert symplectic_pairing(E1, u, [0, 0, 1]) == 0.0


def test_symplectic_pairing_sign_and_antisymmetry(rng, unit_vector):
    p = ProjectivePoint(unit_vector(3))
    u, v = random_horizontal(rng, p), random_horizontal(rng, p)
    assert symplectic_pairing(p, u, 1j * u) == pytest.approx(-np.linalg.norm(u) ** 2, abs=1e-12)
    assert symplectic_pairing(p, u, v) == pytest.approx(-symplectic_pairing(p, v, u), abs=1e-15)


def test_symplectic_pairing_is_compatible_with_the_metric(rng, unit_vector):
    for _ in range(20):
        p = ProjectivePoint(unit_vector(3))
        u, v = random_horizontal(rng, p), random_horizontal(rng, p)
        metric = np.real(np.vdot(v, 1j * u))
        assert symplectic_pairing(p, u, v) == pytest.approx(-metric, abs=1e-12)


def test_symplectic_pairing_rejects_vertical_vectors():
    with pytest.raises(NotHorizontalError):
        symplectic_pairing(E1, [1j, 0, 0], [0, 1, 0])


# ==================== sigma_angle ====================
def test_sigma_angle_of_a_plane_with_itself_is_zero():
    a = HorizontalFrame(E1, [[0, 1, 0], [0, 0, 1]])
    assert sigma_angle(a, a) < 1e-6


def test_sigma_angle_of_orthogonal_lines_in_cp1():
    base = ProjectivePoint([1, 0])
    real_axis = HorizontalFrame(base, [[0, 1]])
    imaginary_axis = HorizontalFrame(base, [[0, 1j]])
    assert sigma_angle(real_axis, imaginary_axis) == pytest.approx(1.0, abs=1e-12)


def test_sigma_angle_of_a_lagrangian_plane_and_its_rotation():
    a = HorizontalFrame(E1, [[0, 1, 0], [0, 0, 1]])
    b = HorizontalFrame(E1, [[0, 1j, 0], [0, 0, 1j]])
    assert sigma_angle(a, b) == pytest.approx(1.0, abs=1e-12)


def test_sigma_angle_needs_a_common_base_point():
    a = HorizontalFrame(E1, [[0, 1, 0]])
    b = HorizontalFrame(E2, [[1, 0, 0]])
    with pytest.raises(BasePointMismatchError):
        sigma_angle(a, b)


def test_sigma_angle_is_gauge_and_unitary_invariant(rng, unit_vector):
    p = ProjectivePoint(unit_vector(3))
    a = HorizontalFrame(p, [random_horizontal(rng, p) for _ in range(2)])
    b = HorizontalFrame(p, [random_horizontal(rng, p) for _ in range(2)])
    reference = sigma_angle(a, b)
    assert 0.0 <= reference <= 1.0

    phase = np.exp(2.1j)
    rephased = HorizontalFrame(ProjectivePoint(phase * p.z), phase * b.vectors)
    assert sigma_angle(a, rephased) == pytest.approx(reference, abs=1e-12)

    u = haar_unitary(3, derive_stream(5, 3))
    moved = sigma_angle(transform_frame(u, a), transform_frame(u, b))
    assert moved == pytest.approx(reference, abs=1e-10)
    assert sigma_angle(b, a) == pytest.approx(reference, abs=1e-12)
