"""
CSV implementation of the SampleLogRepository.
One row per Haar sample: sample_index, count, min_sigma, flag, seconds.
"""

import csv
from pathlib import Path
from typing import Optional

from exceptions import RepositoryError
from repositories.base import SampleLogRepository

COLUMNS = ('sample_index', 'count', 'min_sigma', 'flag', 'seconds')


class CsvSampleLogRepository(SampleLogRepository):
    """Streams sample rows to <output_dir>/<name>.csv, flushing every row."""

    def __init__(self, output_dir: str = "reports"):
        """Initialize repository without an open log."""
        self.output_dir = Path(output_dir)
        self._handle = None
        self._writer = None

    def open(self, name: str) -> Path:
        """
        Create the log file and write its header.
        Raises: RepositoryError: If the file cannot be created
        """
        self.close()
        path = self.output_dir / f"{name}.csv"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            self._handle = path.open('w', newline='', encoding='utf-8')
            self._writer = csv.writer(self._handle)
            self._writer.writerow(COLUMNS)
            self._handle.flush()
        except OSError as e:
            raise RepositoryError(f"Failed to open sample log '{path}': {e}")
        return path

    def append(self, sample_index: int, count: int, min_sigma: Optional[float],
               flag: str, seconds: float):
        """
        Write and flush one row; a missing min_sigma is left empty.
        Raises: RepositoryError: If no log is open or the write fails
        """
        if self._writer is None:
            raise RepositoryError("No sample log is open.")
        sigma = '' if min_sigma is None else repr(float(min_sigma))
        try:
            self._writer.writerow([sample_index, count, sigma, flag, f"{seconds:.6f}"])
            self._handle.flush()
        except OSError as e:
            raise RepositoryError(f"Failed to write sample log row: {e}")

    def close(self):
        """Close the current log file."""
        if self._handle is not None:
            self._handle.close()
        self._handle = None
        self._writer = None
