"""Input validation module for Clifford Bench."""

from .input_validator import InputValidator
from .config_loader import ConfigLoader

__all__ = ['InputValidator', 'ConfigLoader']
