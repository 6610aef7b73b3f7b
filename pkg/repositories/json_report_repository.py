"""
JSON implementation of the ReportRepository.
Reports are written as <output_dir>/<name>.json with sorted keys, so the
same run produces the same bytes apart from the metadata block.
"""

import json
from pathlib import Path

import numpy as np

from exceptions import RepositoryError
from repositories.base import ReportRepository


def _to_builtin(value):
    """json.dump hook for numpy scalars and arrays."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


class JsonReportRepository(ReportRepository):
    """File-based JSON report storage."""

    def __init__(self, output_dir: str = "reports", version: str = ""):
        """Initialize repository; the directory is created on first save."""
        self.output_dir = Path(output_dir)
        self.version = version

    def _path(self, name: str) -> Path:
        return self.output_dir / f"{name}.json"

    def save(self, name: str, report: dict, config: dict, metadata: dict) -> Path:
        """
        Write the report file.
        Raises: RepositoryError: If the file cannot be written
        """
        payload = {
            'report': report,
            'config': config,
            'version': self.version,
            'metadata': metadata
        }
        path = self._path(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            text = json.dumps(payload, sort_keys=True, indent=2, default=_to_builtin)
            path.write_text(text + "\n", encoding="utf-8")
        except (OSError, TypeError, ValueError) as e:
            raise RepositoryError(f"Failed to write report '{path}': {e}")
        return path
