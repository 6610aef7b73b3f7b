"""
Run configuration model.
Every knob of an experiment; fully serialized into each report.
"""

import os
from dataclasses import dataclass, asdict
from typing import Optional

from exceptions import ValidationError
from models.intersection import CounterSettings

OUTPUT_DIR_ENV = 'CLIFFORD_BENCH_OUTPUT_DIR'

COMMANDS = (
    'constants', 'volume', 'intersect', 'crofton',
    'sigma-check', 'deform', 'cho-check'
)
OUTPUT_FORMATS = ('json', 'csv', 'text')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')
COUNT_METHODS = ('auto', 'parametric', 'levelset', 'oracle')


def default_output_dir() -> str:
    """Output directory from the environment, 'reports' otherwise."""
    return os.environ.get(OUTPUT_DIR_ENV, 'reports')


@dataclass(frozen=True)
class RunConfig:
    """
    Resolved configuration of one command.

    Domain Rules:
    - command is a known subcommand
    - n >= 1, samples >= 1, grids and budgets positive
    - tolerances positive, thresholds within their natural ranges

    Defaults follow the module descriptions; config files and flags
    override them (flags win).
    """

    command: str = 'constants'
    n: int = 2
    n_max: int = 4
    master_seed: int = 0
    samples: int = 100
    pair: str = 'clifford:clifford'
    model: str = 'clifford'
    g_source: str = 'random'
    g_file: Optional[str] = None
    method: str = 'auto'
    volume_grid: int = 0
    parametric_grid: int = 0
    levelset_grid: int = 64
    deformed_grid: int = 32
    gap_tolerance: float = 1e-16
    residual_tolerance: float = 1e-10
    dedupe_radius: float = 1e-6
    sigma_min: float = 1e-4
    max_iterations: int = 60
    max_halvings: int = 6
    hamiltonian: Optional[str] = None
    families: int = 1
    max_coefficient: float = 0.2
    time: float = 0.3
    flow_step: float = 1e-3
    fd_step: float = 1e-5
    pairs: int = 5
    draws: int = 10000
    z_threshold: float = 3.0
    max_excluded_fraction: float = 0.02
    threads: int = 0
    output_dir: str = ''
    output_format: str = 'text'
    log_level: str = 'WARNING'

    def __post_init__(self):
        """Validate data immediately after object creation."""
        if not self.output_dir:
            object.__setattr__(self, 'output_dir', default_output_dir())
        self._validate()

    def _validate(self):
        """Raises ValidationError if any rule is violated."""
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command '{self.command}'.")
        if self.n < 1 or self.n_max < 1:
            raise ValidationError("Dimensions must be >= 1.")
        if self.samples < 1 or self.pairs < 1 or self.draws < 1 or self.families < 1:
            raise ValidationError("Sample counts must be >= 1.")
        if self.volume_grid != 0 and self.volume_grid < 8:
            raise ValidationError("Volume grid must be >= 8 per axis.")
        if self.volume_grid % 2:
            raise ValidationError("Volume grid must be even (Richardson halving).")
        if not 0 < self.flow_step <= 1e-2:
            raise ValidationError("Flow step must be in (0, 1e-2].")
        if self.fd_step <= 0 or self.max_coefficient < 0:
            raise ValidationError("Steps and coefficients must be positive.")
        if self.z_threshold <= 0 or not 0 <= self.max_excluded_fraction <= 1:
            raise ValidationError("Acceptance thresholds out of range.")
        if self.threads < 0:
            raise ValidationError("Thread count cannot be negative.")
        if self.g_source not in ('random', 'file'):
            raise ValidationError("g source must be 'random' or 'file'.")
        if self.g_source == 'file' and not self.g_file:
            raise ValidationError("g source 'file' needs a unitary file.")
        if self.method not in COUNT_METHODS:
            raise ValidationError(
                f"Count method must be one of: {', '.join(COUNT_METHODS)}."
            )
        if self.output_format not in OUTPUT_FORMATS:
            raise ValidationError(
                f"Output format must be one of: {', '.join(OUTPUT_FORMATS)}."
            )
        if self.log_level.upper() not in LOG_LEVELS:
            raise ValidationError(
                f"Log level must be one of: {', '.join(LOG_LEVELS)}."
            )
        # counter tolerances are validated by CounterSettings itself
        self.counter_settings()

    @property
    def worker_count(self) -> int:
        """Worker threads to use (0 means machine parallelism)."""
        return self.threads or (os.cpu_count() or 1)

    def counter_settings(self) -> CounterSettings:
        """Tolerances and seed grids for the intersection counter."""
        return CounterSettings(
            gap_tolerance=self.gap_tolerance,
            residual_tolerance=self.residual_tolerance,
            dedupe_radius=self.dedupe_radius,
            sigma_min=self.sigma_min,
            max_iterations=self.max_iterations,
            max_halvings=self.max_halvings,
            parametric_grid=self.parametric_grid,
            levelset_grid=self.levelset_grid,
            deformed_grid=self.deformed_grid
        )

    def to_record(self) -> dict:
        """
        Serializable form embedded in reports.
        Thread count and log level do not change results and are left out,
        so reports stay byte-identical across machines.
        """
        record = asdict(self)
        record.pop('threads')
        record.pop('log_level')
        return record
