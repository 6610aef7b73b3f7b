"""
Command menu for Clifford Bench.
Parses the command line into a RunConfig and routes each subcommand to
its CLIHandler method, mapping errors to exit codes.
"""

import argparse
import logging
from typing import List, Optional

from cli.cli_handler import CLIHandler
from exceptions import (
    AcceptanceError,
    GeometryError,
    NumericalError,
    RepositoryError,
    UsageError,
    ValidationError
)
from models import RunConfig
from models.run_config import COUNT_METHODS, LOG_LEVELS, OUTPUT_FORMATS
from validators import ConfigLoader, InputValidator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ACCEPTANCE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_REPOSITORY = 4


class _Parser(argparse.ArgumentParser):
    """ArgumentParser raising UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(f"{message}\n\n{self.format_usage().strip()}")


class CommandMenu:
    """Subcommand router for Clifford Bench."""

    def __init__(self):
        """Build the argument parser once."""
        self.parser = self._build_parser()

    @staticmethod
    def _build_parser() -> argparse.ArgumentParser:
        """All subcommands and their flags; every default is None so that
        config-file values survive unless a flag is given."""
        parser = _Parser(
            prog='clifford-bench',
            description='Integral-geometry workbench for Lagrangians in CP^n.'
        )
        parser.add_argument('--config', help='INI file with a [run] section')
        parser.add_argument('--out-dir', dest='output_dir', help='report directory')
        parser.add_argument('--format', dest='output_format', choices=OUTPUT_FORMATS)
        parser.add_argument('--threads', type=int, help='worker threads (default: all cores)')
        parser.add_argument('--log-level', dest='log_level', type=str.upper, choices=LOG_LEVELS)
        commands = parser.add_subparsers(dest='command', metavar='COMMAND')
        commands.required = True

        constants = commands.add_parser('constants', help='closed-form constants table')
        constants.add_argument('--n-max', dest='n_max', type=int)

        volume = commands.add_parser('volume', help='quadrature volume of a Lagrangian')
        volume.add_argument('--model', choices=('clifford', 'rp'))
        volume.add_argument('--n', type=int)
        volume.add_argument('--grid', dest='volume_grid', type=int)

        intersect = commands.add_parser('intersect', help='count gP ∩ Q for one g')
        intersect.add_argument('--n', type=int)
        intersect.add_argument('--pair')
        intersect.add_argument('--g', dest='g', metavar='random|FILE')
        intersect.add_argument('--method', choices=COUNT_METHODS)
        intersect.add_argument('--seed', dest='master_seed', type=int)
        CommandMenu._add_counter_flags(intersect)

        crofton = commands.add_parser('crofton', help='Monte Carlo kinematic formula')
        crofton.add_argument('--n', type=int)
        crofton.add_argument('--pair')
        crofton.add_argument('--samples', type=int)
        crofton.add_argument('--seed', dest='master_seed', type=int)
        crofton.add_argument('--volume-grid', dest='volume_grid', type=int)
        crofton.add_argument('--z-threshold', dest='z_threshold', type=float)
        crofton.add_argument('--max-excluded', dest='max_excluded_fraction', type=float)
        CommandMenu._add_counter_flags(crofton)

        sigma = commands.add_parser('sigma-check', help='stabilizer average of sigma')
        sigma.add_argument('--n', type=int)
        sigma.add_argument('--pairs', type=int)
        sigma.add_argument('--draws', type=int)
        sigma.add_argument('--seed', dest='master_seed', type=int)
        sigma.add_argument('--z-threshold', dest='z_threshold', type=float)

        deform = commands.add_parser('deform', help='Hamiltonian deformation of L_n')
        CommandMenu._add_hamiltonian_flags(deform)
        deform.add_argument('--grid', dest='volume_grid', type=int)

        cho = commands.add_parser('cho-check', help='count bound and volume ratio')
        CommandMenu._add_hamiltonian_flags(cho)
        cho.add_argument('--families', type=int)
        cho.add_argument('--samples', type=int)
        cho.add_argument('--volume-grid', dest='volume_grid', type=int)
        cho.add_argument('--max-excluded', dest='max_excluded_fraction', type=float)
        CommandMenu._add_counter_flags(cho)
        return parser

    @staticmethod
    def _add_counter_flags(parser: argparse.ArgumentParser):
        """Seed grids of the intersection counter."""
        parser.add_argument('--parametric-grid', dest='parametric_grid', type=int)
        parser.add_argument('--levelset-grid', dest='levelset_grid', type=int)
        parser.add_argument('--deformed-grid', dest='deformed_grid', type=int)

    @staticmethod
    def _add_hamiltonian_flags(parser: argparse.ArgumentParser):
        """Flags shared by the deformation commands."""
        parser.add_argument('--hamiltonian', metavar='FILE|random')
        parser.add_argument('--n', type=int)
        parser.add_argument('--time', type=float)
        parser.add_argument('--step', dest='flow_step', type=float)
        parser.add_argument('--fd-step', dest='fd_step', type=float)
        parser.add_argument('--max-coefficient', dest='max_coefficient', type=float)
        parser.add_argument('--seed', dest='master_seed', type=int)

    def parse(self, argv: Optional[List[str]]) -> RunConfig:
        """
        Resolve the RunConfig of a command line.
        Raises: UsageError: If flags, config file or values are invalid
        """
        args = vars(self.parser.parse_args(argv))
        command = args.pop('command')
        config_path = args.pop('config', None)

        g = args.pop('g', None)
        if g is not None:
            if g == 'random':
                args['g_source'] = 'random'
            else:
                args['g_source'], args['g_file'] = 'file', g
        if args.get('pair') is not None:
            args['pair'] = ':'.join(InputValidator.parse_pair(args['pair']))
        return ConfigLoader.resolve(command, config_path, args)

    def handle(self, handler: CLIHandler, config: RunConfig) -> int:
        """
        Run one command and map its outcome to an exit code:
        0 success, 1 acceptance failure, 2 usage, 3 numerical, 4 persistence.
        """
        actions = {
            'constants': handler.constants,
            'volume': handler.volume,
            'intersect': handler.intersect,
            'crofton': handler.crofton,
            'sigma-check': handler.sigma_check,
            'deform': handler.deform,
            'cho-check': handler.cho_check
        }
        try:
            actions[config.command]()
        except AcceptanceError as e:
            handler.print_error(f"Acceptance failed: {e}")
            return EXIT_ACCEPTANCE
        except (UsageError, ValidationError) as e:
            handler.print_error(str(e))
            return EXIT_USAGE
        except (NumericalError, GeometryError) as e:
            handler.print_error(f"{type(e).__name__}: {e}")
            handler.write_diagnostic(e)
            return EXIT_NUMERICAL
        except RepositoryError as e:
            handler.print_error(str(e))
            return EXIT_REPOSITORY
        return EXIT_OK
