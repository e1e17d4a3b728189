"""Error definitions for the DHC classifier."""


class DHCError(Exception):
    """Base error class for the DHC classifier."""
    exit_code = 1


class ConfigurationError(DHCError):
    """Configuration and usage errors."""
    exit_code = 1


class TaxonomyError(DHCError):
    """Category tree errors."""
    exit_code = 2


class DataError(DHCError):
    """Dataset, synthetic generation and metric input errors."""
    exit_code = 2


class ShapeError(DHCError):
    """Matrix shape, dimension and trace errors."""
    exit_code = 2


class CheckpointError(DHCError):
    """Checkpoint persistence errors."""
    exit_code = 2


class NumericError(DHCError):
    """Non-finite values and failed gradient checks."""
    exit_code = 3
