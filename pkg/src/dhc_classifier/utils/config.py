"""Configuration file management for the DHC classifier."""
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .errors import ConfigurationError

# Keys that name files; resolved against the config file's directory
PATH_KEYS = ("taxonomy", "train_data", "test_data", "checkpoint")

DEFAULTS: Dict[str, str] = {
    "taxonomy": "",
    "train_data": "",
    "test_data": "",
    "test_fraction": "0.1",
    "split_seed": "0",
    "checkpoint": "",
    "epochs": "50",
    "batch_size": "32",
    "optimizer": "adam",
    "lr": "0.001",
    "momentum": "0.0",
    "adam_beta1": "0.9",
    "adam_beta2": "0.999",
    "adam_eps": "1e-8",
    "seed": "0",
    "input_dim": "4096",
    "ngram_order": "2",
    "base_hidden_dims": "256",
    "root_dim": "128",
    "layer_dims": "64",
    "share_mode": "hierarchical",
    "rep_bias": "true",
    "head_bias": "true",
    "alpha": "1.0",
    "beta": "0.25",
    "ploss_mode": "error",
    "ploss_constant": "2.0",
    "decoder": "greedy",
    "beam_width": "3",
    "eval_every": "1",
    "workers": "4",
    "log_level": "INFO",
    "progress": "true",
}


class Config:
    """Key/value configuration loaded from a ``key = value`` file."""

    def __init__(self, values: Optional[Dict[str, str]] = None, base_dir: Optional[Path] = None):
        """Initialize configuration.

        Args:
            values: Overrides applied on top of the defaults
            base_dir: Directory relative paths resolve against
        """
        self.base_dir = base_dir or Path.cwd()
        self.config: Dict[str, str] = dict(DEFAULTS)
        if values:
            self.update(values)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "Config":
        """Load configuration from a file.

        Args:
            path: Path to the configuration file

        Returns:
            Config: Loaded configuration
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigurationError(f"Failed to read config {path}: {str(e)}")
        return cls(cls.parse(text), base_dir=path.resolve().parent)

    @staticmethod
    def parse(text: str) -> Dict[str, str]:
        """Parse ``key = value`` lines.

        Args:
            text: Configuration file content

        Returns:
            Dict[str, str]: Raw values in file order
        """
        values: Dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(f"Line {lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in DEFAULTS:
                raise ConfigurationError(f"Line {lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigurationError(f"Line {lineno}: duplicate key {key!r}")
            values[key] = value
        return values

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value, with path keys resolved."""
        value = self.config.get(key, default)
        if key in PATH_KEYS and value:
            path = Path(value)
            return str(path if path.is_absolute() else self.base_dir / path)
        return value

    def set(self, key: str, value: Any):
        """Set configuration value."""
        if key not in DEFAULTS:
            raise ConfigurationError(f"Unknown configuration key: {key}")
        self.config[key] = str(value)

    def update(self, updates: Dict[str, Any]):
        """Update multiple configuration values."""
        for key, value in updates.items():
            self.set(key, value)

    def resolved(self) -> Dict[str, str]:
        """All values with path keys resolved."""
        return {key: self.get(key) for key in self.config}


def describe_defaults() -> str:
    """Render the defaults for ``--help`` output."""
    return "\n".join(f"  {key} = {value}" for key, value in DEFAULTS.items())
