import numpy as np
import pytest

from exceptions import DegenerateFrameError, NotHorizontalError, ValidationError
from models import (
    ConstantsRow,
    CounterSettings,
    CountMethod,
    HamiltonianSpec,
    HorizontalFrame,
    IntersectionFlag,
    IntersectionReport,
    KinematicEstimate,
    LagrangianKind,
    ParametricLagrangian,
    ProjectivePoint,
    RunConfig,
    SeedStream,
    UnitaryMatrix
)
from models.run_config import OUTPUT_DIR_ENV


# ==================== points and frames ====================
def test_projective_point_needs_a_unit_vector():
    with pytest.raises(ValidationError):
        ProjectivePoint([1, 1])
    with pytest.raises(ValidationError):
        ProjectivePoint([1])
    with pytest.raises(ValidationError):
        ProjectivePoint([np.nan, 0])


def test_projective_point_is_read_only():
    p = ProjectivePoint([0, 1j])
    assert p.n == 1
    assert p.to_reals() == [0.0, 0.0, 0.0, 1.0]
    with pytest.raises(ValueError):
        p.z[0] = 1


def test_horizontal_frame_rules():
    base = ProjectivePoint([1, 0, 0])
    frame = HorizontalFrame(base, [[0, 1, 0], [0, 0, 1j]])
    assert frame.rank == 2 and frame.n == 2
    with pytest.raises(NotHorizontalError):
        HorizontalFrame(base, [[1, 1, 0]])
    with pytest.raises(DegenerateFrameError):
        HorizontalFrame(base, [[0, 1, 0], [0, 2, 0]])
    with pytest.raises(ValidationError):
        HorizontalFrame(base, [[0, 1]])


# ==================== unitary matrices and seed streams ====================
def test_unitary_matrix_rules():
    with pytest.raises(ValidationError):
        UnitaryMatrix([[1, 1], [0, 1]])
    with pytest.raises(ValidationError):
        UnitaryMatrix(np.diag([1j, 1]), special=True)
    g = UnitaryMatrix(np.diag([1j, -1j]), special=True)
    np.testing.assert_allclose(g.adjoint().entries @ g.entries, np.eye(2), atol=1e-15)
    assert g.describe()['special'] is True


def test_seed_stream_rules():
    with pytest.raises(ValidationError):
        SeedStream(True, 0)
    with pytest.raises(ValidationError):
        SeedStream(1, -1)
    stream = SeedStream(1, 2, 3)
    assert stream.seed_sequence().spawn_key == (3, 2)
    assert stream.generator().random() == SeedStream(1, 2, 3).generator().random()


# ==================== Lagrangian descriptors ====================
def test_lagrangian_constructors():
    torus = ParametricLagrangian.clifford(2)
    assert torus.is_torus and torus.param_dim == 2
    assert ParametricLagrangian.real_projective(2).param_dim == 3

    image = ParametricLagrangian.unitary_image(torus, UnitaryMatrix.identity(3))
    assert image.kind is LagrangianKind.UNITARY_IMAGE
    assert image.root is torus
    assert image.is_torus
    assert image.describe()['base'] == torus.describe()


def test_lagrangian_rules():
    with pytest.raises(ValidationError):
        ParametricLagrangian.clifford(0)
    with pytest.raises(ValidationError):
        ParametricLagrangian.unitary_image(ParametricLagrangian.clifford(2), UnitaryMatrix.identity(2))
    with pytest.raises(ValidationError):
        ParametricLagrangian(
            LagrangianKind.DEFORMED, 2, base=ParametricLagrangian.clifford(2),
            hamiltonian=HamiltonianSpec.quadratic(np.eye(3)), time=0.1, flow_step=0.05
        )


# ==================== reports ====================
def test_intersection_report_rules():
    point = ProjectivePoint([1, 0])
    with pytest.raises(ValidationError):
        IntersectionReport(2, (point,), (0.5,), 0.5, IntersectionFlag.CLEAN, CountMethod.LEVELSET)
    with pytest.raises(ValidationError):
        IntersectionReport(1, (point,), (0.5,), 0.4, IntersectionFlag.CLEAN, CountMethod.LEVELSET)
    with pytest.raises(ValidationError):
        IntersectionReport(0, (), (), 0.4, IntersectionFlag.CLEAN, CountMethod.LEVELSET)


def test_intersection_report_record():
    report = IntersectionReport(
        1, (ProjectivePoint([1, 0]),), (0.25,), 0.25,
        IntersectionFlag.NEAR_DEGENERATE, CountMethod.PARAMETRIC, {'seeds': 4}
    )
    assert not report.is_clean
    assert report.to_record() == {
        'count': 1,
        'points': [[1.0, 0.0, 0.0, 0.0]],
        'sigmas': [0.25],
        'min_sigma': 0.25,
        'flag': 'near_degenerate',
        'method': 'parametric',
        'diagnostics': {'seeds': 4}
    }


def test_kinematic_estimate_rules():
    common = dict(pair=({}, {}), mean=2.0, predicted=2.0, z_score=0.0, master_seed=0)
    with pytest.raises(ValidationError):
        KinematicEstimate(samples=10, clean_samples=11, std_error=0.0, excluded_fraction=0.0, **common)
    with pytest.raises(ValidationError):
        KinematicEstimate(samples=10, clean_samples=10, std_error=-1.0, excluded_fraction=0.0, **common)
    estimate = KinematicEstimate(
        samples=10, clean_samples=10, std_error=0.0, excluded_fraction=0.0,
        count_histogram={2: 10}, **common
    )
    assert estimate.to_record()['count_histogram'] == {'2': 10}


def test_constants_row_checks_its_identities():
    with pytest.raises(ValidationError):
        ConstantsRow(1, 2 * np.pi, np.pi, np.pi, np.pi ** 2 / 2, np.pi, 2.0)


# ==================== settings ====================
def test_counter_settings_defaults():
    settings = CounterSettings()
    assert settings.parametric_grid_for(1) == 48
    assert settings.parametric_grid_for(2) == 12
    assert CounterSettings(parametric_grid=20).parametric_grid_for(1) == 20
    with pytest.raises(ValidationError):
        CounterSettings(parametric_grid=8)
    with pytest.raises(ValidationError):
        CounterSettings(gap_tolerance=0.0)


def test_run_config_rules(monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, '/tmp/bench')
    config = RunConfig(command='crofton', threads=3, log_level='DEBUG')
    assert config.output_dir == '/tmp/bench'
    assert config.worker_count == 3
    record = config.to_record()
    assert 'threads' not in record and 'log_level' not in record
    assert record['command'] == 'crofton'

    for bad in (dict(command='plot'), dict(volume_grid=9), dict(volume_grid=4),
                dict(flow_step=0.05), dict(g_source='file'), dict(method='guess'),
                dict(sigma_min=-1.0)):
        with pytest.raises(ValidationError):
            RunConfig(**bad)
