import numpy as np
import pytest

from geometry.random_unitary import derive_stream, haar_unitary, to_special
from models import CounterSettings
from services import IntersectionService


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_vector(rng):
    def draw(m):
        z = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        return z / np.linalg.norm(z)
    return draw


@pytest.fixture
def haar_special():
    def draw(n, index, master_seed=7):
        return to_special(haar_unitary(n + 1, derive_stream(master_seed, index)))
    return draw


@pytest.fixture
def counter():
    return IntersectionService(CounterSettings())


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    # keep stray reports out of the working tree
    directory = tmp_path / "reports"
    monkeypatch.setenv("CLIFFORD_BENCH_OUTPUT_DIR", str(directory))
    return directory
