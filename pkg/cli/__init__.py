"""CLI module for Clifford Bench."""

from .cli_handler import CLIHandler
from .menu import CommandMenu

__all__ = ['CLIHandler', 'CommandMenu']
