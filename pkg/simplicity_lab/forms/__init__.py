"""
Run configuration forms and their fields.
"""
from .config import SUBCOMMANDS, ConfigError, RunConfig, parse_config

__all__ = (
    'SUBCOMMANDS', 'ConfigError', 'RunConfig', 'parse_config',
)
