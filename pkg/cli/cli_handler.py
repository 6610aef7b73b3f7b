"""
CLI Handler for Clifford Bench.
Runs one experiment per subcommand, prints its summary, persists its
report and enforces its acceptance criterion.
"""

import csv
import io
import json
import logging
import time
from datetime import datetime, timezone
from typing import List, Optional

from exceptions import AcceptanceError, RepositoryError, UsageError
from geometry.hamiltonian_flow import random_quartic
from geometry.random_unitary import derive_stream
from models import HamiltonianSpec, RunConfig
from repositories.base import ReportRepository
from services import ExperimentService, KinematicService
from services.experiment_service import build_model
from validators import InputValidator

logger = logging.getLogger(__name__)

HAMILTONIAN_DOMAIN = 2
LAGRANGIAN_TOLERANCE = 1e-6
DRIFT_TOLERANCE = 1e-6


class CLIHandler:
    """Handles all command executions."""

    def __init__(
        self,
        experiment_service: ExperimentService,
        kinematic_service: KinematicService,
        report_repo: ReportRepository,
        config: RunConfig
    ):
        """Initialize with service and repository dependencies."""
        self.experiment_service = experiment_service
        self.kinematic_service = kinematic_service
        self.report_repo = report_repo
        self.config = config
        self.validator = InputValidator()
        self._started = time.perf_counter()
        self._timestamp = datetime.now(timezone.utc).isoformat()

    def print_header(self, title: str):
        """Print a formatted header."""
        if self.config.output_format == 'text':
            print("\n" + "=" * 60)
            print(f"  {title}")
            print("=" * 60)

    def print_error(self, message: str):
        """Print an error message."""
        print(f"\n ERROR: {message}")

    def print_success(self, message: str):
        """Print a success message."""
        if self.config.output_format == 'text':
            print(f"\n {message}")

    # ==================== OUTPUT ====================
    def _save(self, name: str, report: dict):
        """Persist a report with the resolved config and timing metadata."""
        metadata = {
            'started': self._timestamp,
            'seconds': round(time.perf_counter() - self._started, 6)
        }
        path = self.report_repo.save(name, report, self.config.to_record(), metadata)
        self.print_success(f"Report written to {path}")

    def _emit(self, record: dict, lines: List[str], table: Optional[List[dict]] = None):
        """Print a record in the configured output format."""
        if self.config.output_format == 'json':
            print(json.dumps(record, sort_keys=True, indent=2))
        elif self.config.output_format == 'csv':
            rows = table if table is not None else [
                {'key': k, 'value': json.dumps(v, sort_keys=True)} for k, v in sorted(record.items())
            ]
            buffer = io.StringIO()
            writer = csv.DictWriter(buffer, fieldnames=list(rows[0].keys()), lineterminator='\n')
            writer.writeheader()
            writer.writerows(rows)
            print(buffer.getvalue(), end='')
        else:
            for line in lines:
                print(f"  {line}")

    def write_diagnostic(self, error: Exception):
        """Store a diagnostic report for a numerical or geometric failure."""
        report = {'error': type(error).__name__, 'message': str(error)}
        estimate = getattr(error, 'estimate', None)
        if estimate is not None:
            report['partial_estimate'] = estimate.to_record()
        try:
            self._save(f"{self.config.command}_diagnostic", report)
        except RepositoryError as e:
            logger.error("Could not write diagnostic report: %s", e)

    def _pair(self) -> tuple:
        return tuple(self.config.pair.split(':'))

    def _hamiltonians(self) -> List[HamiltonianSpec]:
        """
        Hamiltonians of a deformation command: one from a file, or
        `families` random quartic ones.
        Raises: UsageError: If no Hamiltonian source was given
        """
        source = self.config.hamiltonian
        if not source:
            raise UsageError(f"{self.config.command} needs --hamiltonian FILE|random")
        if source != 'random':
            return [self.validator.load_hamiltonian(source)]
        count = self.config.families if self.config.command == 'cho-check' else 1
        return [
            random_quartic(
                self.config.n,
                derive_stream(self.config.master_seed, k, HAMILTONIAN_DOMAIN),
                self.config.max_coefficient
            )
            for k in range(count)
        ]

    # ==================== COMMANDS ====================
    def constants(self):
        """Table of closed-form constants for n = 1..n_max."""
        self.print_header(f"Constants ledger, n = 1..{self.config.n_max}")
        rows = self.experiment_service.constants(self.config.n_max)
        records = [row.to_record() for row in rows]

        lines = [f"{'n':>3} {'vol S^n':>14} {'vol RP^n':>14} {'vol L_n':>14} "
                 f"{'ratio':>14} {'lower bound':>14} {'a_n':>10}"]
        for row in rows:
            lines.append(
                f"{row.n:>3} {row.vol_sphere_n:>14.9f} {row.vol_rp_n:>14.9f} "
                f"{row.vol_clifford_n:>14.9f} {row.eqsup_ratio:>14.9f} "
                f"{row.lower_bound:>14.9f} {row.a_n:>10.6f}"
            )
        for row in rows:
            lines.append(f"n={row.n}: a_n = {row.symbolic['a_n']}, "
                         f"vol L_n = {row.symbolic['vol_clifford_n']}")
        table = [
            {k: v for k, v in record.items() if k != 'symbolic'}
            | {f"{k}_symbolic": s for k, s in record['symbolic'].items()}
            for record in records
        ]
        self._emit({'rows': records}, lines, table)
        self._save('constants', {'rows': records})

    def volume(self):
        """Quadrature volume of a Clifford torus or RP^n."""
        c = self.config
        self.print_header(f"Volume of {c.model}, n = {c.n}")
        record = self.experiment_service.volume(c.model, c.n, c.volume_grid)
        v = record['volume']
        self._emit(record, [
            f"volume       = {v['value']:.12f}",
            f"closed form  = {record['closed_form']:.12f}",
            f"rel. error   = {record['relative_error']:.3e}",
            f"Richardson gauge = {v['richardson_gauge']:.3e} (grid {v['grid']})"
        ])
        self._save(f"volume_{c.model}_n{c.n}", record)

    def intersect(self):
        """Intersection points of gP ∩ Q for one g."""
        c = self.config
        pair = self._pair()
        self.print_header(f"Intersect {c.pair}, n = {c.n}")
        if c.g_source == 'file':
            g = self.validator.load_unitary(c.g_file, c.n)
        else:
            g = self.experiment_service.random_unitary(c.n, c.master_seed)
        record = self.experiment_service.intersect(c.n, pair, g, c.method)
        found = record['intersection']
        lines = [f"count = {found['count']} ({found['method']}, {found['flag']})",
                 f"min sigma = {found['min_sigma']}"]
        if 'oracle' in record:
            lines.append(f"eigen oracle count = {record['oracle']['count']}, "
                         f"agrees = {record['oracle_agrees']}")
        self._emit(record, lines)
        self._save(f"intersect_{pair[0]}-{pair[1]}_n{c.n}_seed{c.master_seed}", record)

    def crofton(self):
        """
        Monte Carlo mean of #(gP ∩ Q) against the kinematic prediction.
        Raises: AcceptanceError: z-score above threshold, oracle disagreement,
            or a Clifford self-intersection count that is odd or below 2^n
        """
        c = self.config
        pair = self._pair()
        self.print_header(f"Kinematic formula {c.pair}, n = {c.n}, {c.samples} samples")
        name = f"crofton_{pair[0]}-{pair[1]}_n{c.n}_seed{c.master_seed}"
        estimate = self.kinematic_service.mc_estimate(
            build_model(pair[0], c.n), build_model(pair[1], c.n), c.samples, c.master_seed,
            oracle_check=pair == ('rp', 'rp'), log_name=f"{name}_samples"
        )
        record = estimate.to_record()
        if pair == ('rp', 'rp'):
            record['note'] = (
                "The zero-variance count n+1 equals the lower bound for Hamiltonian "
                "images of RP^n; that bound is not tested here."
            )
        lines = [str(estimate), f"histogram = {record['count_histogram']}"]
        self._emit(record, lines)
        self._save(name, record)

        failures = []
        if estimate.z_score is None or abs(estimate.z_score) > c.z_threshold:
            failures.append(f"z-score {estimate.z_score} exceeds {c.z_threshold}")
        if estimate.oracle_disagreements:
            failures.append(f"eigen oracle disagrees on {estimate.oracle_disagreements} samples")
        if pair == ('clifford', 'clifford'):
            low = [k for k in estimate.count_histogram if k < 2 ** c.n or k % 2]
            if low:
                failures.append(f"counts {sorted(low)} are odd or below {2 ** c.n}")
        if failures:
            raise AcceptanceError("; ".join(failures))
        self.print_success("Kinematic prediction reproduced.")

    def sigma_check(self):
        """
        Constancy of the stabilizer-averaged sigma angle.
        Raises: AcceptanceError: pairwise or analytic z-score above threshold
        """
        c = self.config
        self.print_header(f"Sigma constancy, n = {c.n}, {c.pairs} configurations")
        report = self.kinematic_service.sigma_constancy_test(c.n, c.pairs, c.draws, c.master_seed)
        record = report.to_record()
        lines = [f"config {i}: {m:.6f} ± {s:.6f}"
                 for i, (m, s) in enumerate(zip(report.means, report.std_errors))]
        lines.append(f"max pairwise z = {report.max_pairwise_z:.3f}")
        if report.analytic_reference is not None:
            lines.append(f"reference {report.analytic_reference:.6f}, z = {report.analytic_z:.3f}")
        self._emit(record, lines)
        self._save(f"sigma_n{c.n}_seed{c.master_seed}", record)

        if report.max_pairwise_z > c.z_threshold:
            raise AcceptanceError(f"pairwise z-score {report.max_pairwise_z:.3f} > {c.z_threshold}")
        if report.analytic_z is not None and report.analytic_z > c.z_threshold:
            raise AcceptanceError(f"analytic z-score {report.analytic_z:.3f} > {c.z_threshold}")
        self.print_success("Sigma is constant within the statistical threshold.")

    def deform(self):
        """
        Descriptor and volume of phi_T(L_n).
        Raises: AcceptanceError: Lagrangian defect or energy drift above 1e-6
        """
        c = self.config
        hamiltonian = self._hamiltonians()[0]
        self.print_header(f"Deformation of L_{hamiltonian.n}, T = {c.time}")
        record = self.experiment_service.deform(hamiltonian, c.time, c.flow_step, c.fd_step,
                                                c.volume_grid)
        self._emit(record, [
            f"volume       = {record['volume']['value']:.10f}",
            f"vol ratio    = {record['volume_ratio']:.10f}",
            f"|omega| max  = {record['lagrangian_defect']:.3e}",
            f"energy drift = {record['energy_drift']:.3e}"
        ])
        self._save(f"deform_n{hamiltonian.n}", record)
        if record['lagrangian_defect'] > LAGRANGIAN_TOLERANCE:
            raise AcceptanceError("deformed torus is not Lagrangian within 1e-6")
        if record['energy_drift'] > DRIFT_TOLERANCE:
            raise AcceptanceError("flow energy drift exceeds 1e-6")

    def cho_check(self):
        """
        Count bound and volume bound for deformed tori.
        Raises: AcceptanceError: a clean count below 2^n or a ratio below a_n
        """
        c = self.config
        hamiltonians = self._hamiltonians()
        self.print_header(f"Cho check, {len(hamiltonians)} Hamiltonian(s), T = {c.time}")
        records, failures = [], []
        for family, hamiltonian in enumerate(hamiltonians):
            name = f"cho_n{hamiltonian.n}_seed{c.master_seed}_family{family}"
            report = self.kinematic_service.cho_check(
                hamiltonian, c.time, c.samples, c.master_seed,
                c.flow_step, c.fd_step, log_name=f"{name}_samples"
            )
            records.append(report.to_record())
            if self.config.output_format == 'text':
                print(f"  family {family}: ratio {report.volume_ratio:.6f} "
                      f"(a_n {report.a_n:.6f}), min count {report.min_clean_count}, "
                      f"Oh observed: {report.oh_conjecture_observed}")
            if not report.cho_bound_holds:
                failures.append(f"family {family}: min count {report.min_clean_count}")
            if not report.bound_satisfied:
                failures.append(f"family {family}: volume ratio {report.volume_ratio:.6f}")

        record = {'families': records}
        if self.config.output_format != 'text':
            self._emit(record, [])
        self._save(f"cho_seed{c.master_seed}", record)
        if failures:
            raise AcceptanceError("; ".join(failures))
        self.print_success("Count and volume bounds hold on every family.")
