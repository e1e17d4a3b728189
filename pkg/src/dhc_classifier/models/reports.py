"""Result models produced by decoding, evaluation and training."""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class DecodedPath(BaseModel):
    """A hierarchy-consistent prediction with its per-layer probabilities."""
    model_config = ConfigDict(frozen=True)

    path: Tuple[str, ...]
    indices: Tuple[int, ...]
    probabilities: Tuple[float, ...]
    score: float

    def labels(self, names: Dict[str, str]) -> List[str]:
        """Human-readable labels for the path."""
        return [names.get(node, node) for node in self.path]


class EvalReport(BaseModel):
    """Accuracy and consistency measures over a dataset."""
    layer_accuracy: List[float]
    path_accuracy: float
    consistency_rate: float
    raw_consistency_rate: Optional[float] = None
    raw_layer_accuracy: Optional[List[float]] = None
    sample_count: int
    decoder: Optional[str] = None


class EpochRecord(BaseModel):
    """Training summary of one epoch."""
    epoch: int
    mean_J: float
    mean_lloss: List[float]
    mean_dloss: List[float]
    train_accuracy: List[float]
    raw_consistency_rate: float
    violation_rate: float
    test_accuracy: Optional[List[float]] = None


class TrainingLog(BaseModel):
    """Per-epoch records of one run."""
    records: List[EpochRecord] = Field(default_factory=list)

    def curve(self, layer: int) -> List[Optional[float]]:
        """Held-out accuracy of ``layer`` per epoch (None where not evaluated)."""
        return [r.test_accuracy[layer - 1] if r.test_accuracy else None for r in self.records]


class GradcheckReport(BaseModel):
    """Outcome of the finite-difference suite."""
    trials: int
    max_relative_error: float
    worst_parameter: str
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


class VariantResult(BaseModel):
    """One ablation variant across seeds."""
    name: str
    leaf_accuracy: List[float]
    mean_leaf_accuracy: float
    curves: List[List[Optional[float]]]


class AblationReport(BaseModel):
    """Leaf-layer accuracy of the model variants on shared data."""
    seeds: List[int]
    variants: List[VariantResult]

    def mean(self, name: str) -> float:
        for variant in self.variants:
            if variant.name == name:
                return variant.mean_leaf_accuracy
        raise KeyError(name)
