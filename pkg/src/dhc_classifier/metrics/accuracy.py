"""Per-layer accuracy, path accuracy and hierarchy consistency.

Predictions and gold labels are given per sample as one entry per layer,
either class indices or node ids; both sides must use the same kind.
"""
from typing import Optional, Sequence

import numpy as np

from ..hierarchy import CategoryTree
from ..models.reports import EvalReport
from ..utils.errors import DataError


def _as_table(rows: Sequence[Sequence], name: str) -> np.ndarray:
    table = np.asarray([tuple(r) for r in rows], dtype=object)
    if table.ndim != 2:
        raise DataError(f"{name} must have one entry per layer for every sample")
    return table


def _paired(preds: Sequence[Sequence], golds: Sequence[Sequence]):
    if len(preds) != len(golds):
        raise DataError(f"Length mismatch: {len(preds)} predictions vs {len(golds)} gold paths")
    if len(preds) == 0:
        raise DataError("Cannot score an empty prediction set")
    p, g = _as_table(preds, "preds"), _as_table(golds, "golds")
    if p.shape != g.shape:
        raise DataError(f"Prediction shape {p.shape} != gold shape {g.shape}")
    return p, g


def layer_accuracy(preds: Sequence[Sequence], golds: Sequence[Sequence], layer: int) -> float:
    """Fraction of samples whose layer-``layer`` prediction (1-based) is correct."""
    p, g = _paired(preds, golds)
    if not 1 <= layer <= p.shape[1]:
        raise DataError(f"Layer {layer} outside 1..{p.shape[1]}")
    return float(np.mean(p[:, layer - 1] == g[:, layer - 1]))


def path_accuracy(preds: Sequence[Sequence], golds: Sequence[Sequence]) -> float:
    """Fraction of samples whose whole path is correct."""
    p, g = _paired(preds, golds)
    return float(np.mean(np.all(p == g, axis=1)))


def consistency_rate(preds: Sequence[Sequence[int]], tree: CategoryTree) -> float:
    """Fraction of samples whose per-layer class indices form a parent-child chain."""
    if len(preds) == 0:
        raise DataError("Cannot score an empty prediction set")
    table = np.asarray(preds)
    if table.ndim != 2 or table.shape[1] != tree.depth:
        raise DataError(f"Predictions must be [N x {tree.depth}], got {table.shape}")
    if not np.issubdtype(table.dtype, np.integer):
        raise DataError("Consistency needs integer class indices")
    for layer, size in enumerate(tree.layer_sizes(), start=1):
        column = table[:, layer - 1]
        if np.any(column < 0) or np.any(column >= size):
            raise DataError(f"Invalid class index at layer {layer} (layer has {size} classes)")
    consistent = np.ones(table.shape[0], dtype=bool)
    for layer in range(2, tree.depth + 1):
        consistent &= tree.parent_index(layer)[table[:, layer - 1]] == table[:, layer - 2]
    return float(np.mean(consistent))


def evaluation_report(
    preds: Sequence[Sequence[int]],
    golds: Sequence[Sequence[int]],
    tree: CategoryTree,
    raw_preds: Optional[Sequence[Sequence[int]]] = None,
    decoder: Optional[str] = None,
) -> EvalReport:
    """All measures for decoded predictions, plus raw per-layer argmax ones when given."""
    layers = range(1, tree.depth + 1)
    report = EvalReport(
        layer_accuracy=[layer_accuracy(preds, golds, l) for l in layers],
        path_accuracy=path_accuracy(preds, golds),
        consistency_rate=consistency_rate(preds, tree),
        sample_count=len(preds),
        decoder=decoder,
    )
    if raw_preds is not None:
        report.raw_layer_accuracy = [layer_accuracy(raw_preds, golds, l) for l in layers]
        report.raw_consistency_rate = consistency_rate(raw_preds, tree)
    return report
