"""
Clifford Bench - Integral-Geometry Workbench for CP^n
A batch CLI verifying kinematic-formula predictions, intersection counts
and volume bounds for Lagrangian submanifolds of CP^n.
"""

import logging
import sys
from typing import List, Optional

from cli import CLIHandler, CommandMenu
from exceptions import UsageError
from repositories import CsvSampleLogRepository, JsonReportRepository
from services import ExperimentService, IntersectionService, KinematicService

__version__ = "1.0.0"

EXIT_USAGE = 2


def configure_logging(level: str):
    """Log records go to stderr; stdout carries the command summaries."""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr
    )


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for Clifford Bench.
    Resolves the configuration, initializes all layers (repositories,
    services, CLI) with dependency injection and runs one command.
    Returns the process exit code.
    """
    menu = CommandMenu()
    try:
        config = menu.parse(argv)
    except UsageError as e:
        print(f"\n ERROR: {e}")
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    configure_logging(config.log_level)
    logging.getLogger(__name__).info("Clifford Bench %s: %s", __version__, config.command)

    # Repository layer (report persistence)
    report_repo = JsonReportRepository(config.output_dir, __version__)
    sample_log = CsvSampleLogRepository(config.output_dir)

    # Service layer (experiments)
    counter = IntersectionService(config.counter_settings())
    kinematic_service = KinematicService(
        counter,
        sample_log,
        workers=config.worker_count,
        max_excluded_fraction=config.max_excluded_fraction,
        volume_grid=config.volume_grid
    )
    experiment_service = ExperimentService(counter)

    # CLI layer
    handler = CLIHandler(experiment_service, kinematic_service, report_repo, config)
    try:
        return menu.handle(handler, config)
    except KeyboardInterrupt:
        print("\n  Interrupted; streamed sample logs are kept.")
        return 130


if __name__ == "__main__":
    sys.exit(main())
