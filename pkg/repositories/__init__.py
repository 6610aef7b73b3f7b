"""Repository layer for Clifford Bench."""

from .base import ReportRepository, SampleLogRepository
from .json_report_repository import JsonReportRepository
from .csv_sample_log_repository import CsvSampleLogRepository

__all__ = [
    'ReportRepository',
    'SampleLogRepository',
    'JsonReportRepository',
    'CsvSampleLogRepository'
]
