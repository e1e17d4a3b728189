"""Typed configuration models for training, the network and the loss."""
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)
from typing_extensions import Annotated

from ..utils.config import Config
from ..utils.errors import ConfigurationError


class ShareMode(str, Enum):
    """How per-layer representations are combined."""
    HIERARCHICAL = "hierarchical"
    INDEPENDENT = "independent"


class PlossMode(str, Enum):
    """Dependence punishment variants."""
    ERROR = "error"
    CONSTANT = "constant"


class DecoderType(str, Enum):
    """Inference decoders."""
    GREEDY = "greedy"
    HEURISTIC = "heuristic"
    BEAM = "beam"


class OptimizerType(str, Enum):
    """Parameter update rules."""
    ADAM = "adam"
    SGD = "sgd"


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


# Comma-separated lists in the config file; a single value is broadcast later
IntList = Annotated[List[int], BeforeValidator(_split_list)]
FloatList = Annotated[List[float], BeforeValidator(_split_list)]


def _broadcast(values: List[Any], count: int, name: str) -> List[Any]:
    if len(values) == 1:
        return list(values) * count
    if len(values) != count:
        raise ConfigurationError(f"{name} has {len(values)} entries, expected 1 or {count}")
    return list(values)


class FeaturizerConfig(BaseModel):
    """Hashing featurizer settings."""
    model_config = ConfigDict(frozen=True)

    input_dim: int = Field(4096, ge=1)
    ngram_order: int = Field(2, ge=1)


class ModelConfig(BaseModel):
    """Network dimensions and switches."""
    model_config = ConfigDict(frozen=True)

    input_dim: int = 4096
    base_hidden_dims: IntList = Field(default_factory=lambda: [256])
    root_dim: int = 128
    layer_dims: IntList = Field(default_factory=lambda: [64])
    share_mode: ShareMode = ShareMode.HIERARCHICAL
    rep_bias: bool = True
    head_bias: bool = True

    def dims_for(self, depth: int) -> List[int]:
        """Per-layer widths d_1..d_L."""
        return _broadcast(self.layer_dims, depth, "layer_dims")


class LossConfig(BaseModel):
    """Weights and punishment mode of the hierarchical loss."""
    model_config = ConfigDict(frozen=True)

    alpha: FloatList = Field(default_factory=lambda: [1.0])
    beta: FloatList = Field(default_factory=lambda: [0.25])
    ploss_mode: PlossMode = PlossMode.ERROR
    ploss_constant: float = 2.0

    @field_validator("alpha", "beta")
    @classmethod
    def _unit_range(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("at least one weight is required")
        for value in values:
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"weight {value} outside [0, 1]")
        return values

    @model_validator(mode="after")
    def _constant_above_one(self) -> "LossConfig":
        if self.ploss_mode == PlossMode.CONSTANT and self.ploss_constant <= 1.0:
            raise ValueError(f"ploss_constant must exceed 1, got {self.ploss_constant}")
        return self

    def alphas(self, depth: int) -> List[float]:
        """α_1..α_L."""
        return _broadcast(self.alpha, depth, "alpha")

    def betas(self, depth: int) -> List[float]:
        """β_2..β_L (empty for a single-layer tree)."""
        if depth < 2:
            return []
        return _broadcast(self.beta, depth - 1, "beta")


class OptimizerConfig(BaseModel):
    """Optimizer choice and hyperparameters."""
    model_config = ConfigDict(frozen=True)

    optimizer: OptimizerType = OptimizerType.ADAM
    lr: float = 1e-3
    momentum: float = 0.0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8


class TrainConfig(BaseModel):
    """Experiment-level configuration."""
    model_config = ConfigDict(frozen=True)

    taxonomy: Optional[str] = None
    train_data: Optional[str] = None
    test_data: Optional[str] = None
    test_fraction: float = 0.1
    split_seed: int = 0
    checkpoint: Optional[str] = None
    epochs: int = Field(50, ge=1)
    batch_size: int = Field(32, ge=1)
    seed: int = 0
    featurizer: FeaturizerConfig = Field(default_factory=FeaturizerConfig)
    network: ModelConfig = Field(default_factory=ModelConfig)
    loss: LossConfig = Field(default_factory=LossConfig)
    optim: OptimizerConfig = Field(default_factory=OptimizerConfig)
    decoder: DecoderType = DecoderType.GREEDY
    beam_width: int = Field(3, ge=1)
    eval_every: int = Field(1, ge=0)
    workers: int = Field(4, ge=1)
    log_level: str = "INFO"
    progress: bool = True

    @field_validator("taxonomy", "train_data", "test_data", "checkpoint", mode="before")
    @classmethod
    def _empty_is_none(cls, value: Any) -> Any:
        return value or None

    @model_validator(mode="after")
    def _input_dims_agree(self) -> "TrainConfig":
        if self.network.input_dim != self.featurizer.input_dim:
            raise ValueError(
                f"network input_dim {self.network.input_dim} does not match "
                f"featurizer input_dim {self.featurizer.input_dim}"
            )
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError(f"test_fraction must lie in (0, 1), got {self.test_fraction}")
        return self

    @classmethod
    def from_values(cls, values: Dict[str, Any]) -> "TrainConfig":
        """Build from flat ``key = value`` entries.

        Args:
            values: Flat configuration values (strings or native types)

        Returns:
            TrainConfig: Validated configuration
        """
        nested = {
            "featurizer": {
                "input_dim": values["input_dim"],
                "ngram_order": values["ngram_order"],
            },
            "network": {
                "input_dim": values["input_dim"],
                **{k: values[k] for k in (
                    "base_hidden_dims", "root_dim", "layer_dims",
                    "share_mode", "rep_bias", "head_bias",
                )},
            },
            "loss": {k: values[k] for k in ("alpha", "beta", "ploss_mode", "ploss_constant")},
            "optim": {k: values[k] for k in (
                "optimizer", "lr", "momentum", "adam_beta1", "adam_beta2", "adam_eps",
            )},
        }
        flat = {k: values[k] for k in (
            "taxonomy", "train_data", "test_data", "test_fraction", "split_seed", "checkpoint",
            "epochs", "batch_size", "seed", "decoder", "beam_width", "eval_every", "workers",
            "log_level", "progress",
        )}
        try:
            return cls.model_validate({**flat, **nested})
        except ValidationError as e:
            raise ConfigurationError(f"Invalid configuration: {str(e)}")

    @classmethod
    def from_config(cls, config: Config) -> "TrainConfig":
        """Build from a loaded :class:`Config`."""
        return cls.from_values(config.resolved())

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TrainConfig":
        """Load and validate a configuration file."""
        return cls.from_config(Config.from_file(path))

    def with_overrides(
        self,
        seed: Optional[int] = None,
        beta_zero: bool = False,
        independent: bool = False,
    ) -> "TrainConfig":
        """Apply the CLI seed and ablation switches.

        Args:
            seed: Replacement training seed
            beta_zero: Force β = 0 (representation sharing only)
            independent: Force R_l = R'_l (hierarchical loss only)

        Returns:
            TrainConfig: Updated copy
        """
        updates: Dict[str, Any] = {}
        if seed is not None:
            updates["seed"] = seed
        if beta_zero:
            updates["loss"] = self.loss.model_copy(update={"beta": [0.0]})
        if independent:
            updates["network"] = self.network.model_copy(
                update={"share_mode": ShareMode.INDEPENDENT}
            )
        return self.model_copy(update=updates)
