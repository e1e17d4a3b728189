from .config import DEFAULTS, Config, describe_defaults
from .errors import (
    CheckpointError,
    ConfigurationError,
    DataError,
    DHCError,
    NumericError,
    ShapeError,
    TaxonomyError,
)
from .logging import set_log_level, setup_logging

__all__ = [
    'DEFAULTS',
    'CheckpointError',
    'Config',
    'ConfigurationError',
    'DHCError',
    'DataError',
    'NumericError',
    'ShapeError',
    'TaxonomyError',
    'describe_defaults',
    'set_log_level',
    'setup_logging',
]
