"""
Configuration file loading.
Reads the [run] section of an INI file into RunConfig overrides; keys are
RunConfig field names and values are converted to the field types.
"""

import configparser
from dataclasses import fields
from typing import Dict, Optional

from exceptions import UsageError, ValidationError
from models import RunConfig

SECTION = 'run'


class ConfigLoader:
    """
    Resolves a RunConfig from defaults, a config file and command-line
    overrides, in that order of precedence.
    """

    @staticmethod
    def _convert(name: str, raw: str, kind):
        """Convert a raw string to the annotated field type."""
        if kind in (int, float):
            try:
                return kind(raw)
            except ValueError:
                raise UsageError(f"Config key '{name}' expects a {kind.__name__}, got '{raw}'")
        if kind == Optional[str] and raw.strip().lower() in ('', 'none'):
            return None
        return raw.strip()

    @staticmethod
    def read_file(path: str) -> Dict[str, object]:
        """
        Overrides from the [run] section of an INI file.
        Raises: UsageError: If the file is unreadable, lacks [run] or has unknown keys
        """
        parser = configparser.ConfigParser()
        try:
            with open(path, encoding='utf-8') as handle:
                parser.read_file(handle)
        except (OSError, configparser.Error) as e:
            raise UsageError(f"Cannot read config file '{path}': {e}")
        if not parser.has_section(SECTION):
            raise UsageError(f"Config file '{path}' has no [{SECTION}] section")

        types = {f.name: f.type for f in fields(RunConfig)}
        values = {}
        for key, raw in parser.items(SECTION):
            name = key.replace('-', '_')
            if name not in types:
                raise UsageError(f"Unknown config key '{key}'")
            values[name] = ConfigLoader._convert(name, raw, types[name])
        return values

    @staticmethod
    def resolve(command: str, config_path: Optional[str] = None,
                overrides: Optional[Dict[str, object]] = None) -> RunConfig:
        """
        Build the RunConfig of a command.
        Raises: UsageError: If the file is invalid or a value breaks a config rule
        """
        values: Dict[str, object] = {}
        if config_path:
            values.update(ConfigLoader.read_file(config_path))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        values['command'] = command
        try:
            return RunConfig(**values)
        except (TypeError, ValueError, ValidationError) as e:
            raise UsageError(f"Invalid configuration: {e}")
