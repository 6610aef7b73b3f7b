"""
Abstract base classes for repositories.
Defines the persistence interface for experiment reports and per-sample
logs, so services depend on abstractions rather than on file formats.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional


class ReportRepository(ABC):
    """
    Abstract base class for experiment reports.
    A report has a deterministic part (report, config, version) and a
    metadata part (timestamps, wall-clock time).
    """

    @abstractmethod
    def save(self, name: str, report: dict, config: dict, metadata: dict) -> Path:
        """
        Store a report under a name and return its location.
        Raises: RepositoryError: If the operation fails
        """
        pass


class SampleLogRepository(ABC):
    """
    Abstract base class for streamed per-sample logs.
    Rows are written as they arrive so partial runs stay readable.
    """

    @abstractmethod
    def open(self, name: str) -> Path:
        """
        Start a new log, replacing an older one of the same name.
        Raises: RepositoryError: If the operation fails
        """
        pass

    @abstractmethod
    def append(self, sample_index: int, count: int, min_sigma: Optional[float],
               flag: str, seconds: float):
        """
        Write one sample row.
        Raises: RepositoryError: If no log is open or the write fails
        """
        pass

    @abstractmethod
    def close(self):
        """Finish the current log (no-op without one)."""
        pass
