"""Hierarchical loss: layer losses, violation indicators and dependence losses.

Indicators come from argmax predictions and are treated as constants for the
gradient; only the ERROR punishment mode carries gradient into the layer losses.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..hierarchy import CategoryTree, class_index, is_child
from ..models.config import LossConfig, PlossMode
from ..utils.errors import ConfigurationError, DataError, ShapeError

PROB_FLOOR = 1e-30


def layer_loss(dist: np.ndarray, target: int) -> Tuple[float, np.ndarray]:
    """Cross-entropy of one distribution row against a class index.

    Returns:
        The loss ``-log(ỹ_target)`` and its gradient w.r.t. the logits, ``ỹ - onehot``
    """
    dist = np.asarray(dist, dtype=np.float64).reshape(-1)
    if not 0 <= target < dist.size:
        raise DataError(f"Target class {target} out of range for {dist.size} classes")
    loss = -np.log(max(dist[target], PROB_FLOOR))
    grad = dist.copy()
    grad[target] -= 1.0
    return float(loss), grad


def predicted_class(dist: np.ndarray) -> int:
    """Argmax with ties to the lowest index."""
    dist = np.asarray(dist).reshape(-1)
    if dist.size == 0:
        raise DataError("Cannot predict from an empty distribution")
    return int(np.argmax(dist))


def indicators(
    pred: Sequence[int], gold: Sequence[str], tree: CategoryTree
) -> Tuple[List[int], List[int]]:
    """Violation and error indicators of one sample.

    Args:
        pred: Predicted class index per layer
        gold: Gold label path (node ids)
        tree: Category tree

    Returns:
        (𝔻_2..𝔻_L, 𝕀_1..𝕀_L)
    """
    if len(pred) != tree.depth or len(gold) != tree.depth:
        raise DataError(f"Need {tree.depth} predictions and gold labels")
    nodes = [tree.node_at(l, int(p)) for l, p in enumerate(pred, start=1)]
    errors = [int(class_index(tree, l, g) != int(p))
              for l, (p, g) in enumerate(zip(pred, gold), start=1)]
    violations = [int(not is_child(tree, nodes[l - 2], nodes[l - 1]))
                  for l in range(2, tree.depth + 1)]
    return violations, errors


def dependence_loss(
    lloss_prev: float,
    lloss: float,
    violation: int,
    error_prev: int,
    error: int,
    config: LossConfig,
) -> Tuple[float, float, float]:
    """dloss_l = P_{l-1}^(𝔻·𝕀_{l-1}) · P_l^(𝔻·𝕀_l) - 1.

    Returns:
        (dloss, ∂dloss/∂lloss_{l-1}, ∂dloss/∂lloss_l)
    """
    e_prev = violation * error_prev
    e_cur = violation * error
    if config.ploss_mode == PlossMode.CONSTANT:
        c = config.ploss_constant
        if c <= 1.0:
            raise ConfigurationError(f"ploss_constant must exceed 1, got {c}")
        return float(c ** e_prev * c ** e_cur - 1.0), 0.0, 0.0
    factor = float(np.exp(e_prev * lloss_prev + e_cur * lloss))
    return factor - 1.0, factor * e_prev, factor * e_cur


def total_loss(
    llosses: np.ndarray, dlosses: np.ndarray, config: LossConfig
) -> float:
    """Batch mean of Σ α_i·lloss_i + Σ β_i·dloss_i.

    Args:
        llosses: Layer losses [batch x L] (or one sample [L])
        dlosses: Dependence losses for layers 2..L [batch x (L-1)]
        config: Loss weights

    Returns:
        float: J averaged over the batch
    """
    return float(np.mean(per_sample_total(llosses, dlosses, config)))


def per_sample_total(llosses: np.ndarray, dlosses: np.ndarray, config: LossConfig) -> np.ndarray:
    llosses = np.atleast_2d(np.asarray(llosses, dtype=np.float64))
    depth = llosses.shape[1]
    dlosses = np.asarray(dlosses, dtype=np.float64)
    if dlosses.size != llosses.shape[0] * (depth - 1):
        raise ShapeError(f"Expected {depth - 1} dependence losses per sample, got {dlosses.shape}")
    dlosses = dlosses.reshape(llosses.shape[0], depth - 1)
    alphas = config.alphas(depth)
    betas = config.betas(depth)
    J = np.zeros(llosses.shape[0])
    for i, alpha in enumerate(alphas):
        J += alpha * llosses[:, i]
    for i, beta in enumerate(betas):
        if beta != 0.0:
            J += beta * dlosses[:, i]
    return J


class Indicators:
    """Per-sample 𝔻 [batch x (L-1)] and 𝕀 [batch x L] as 0/1 integer arrays."""

    def __init__(self, violations: np.ndarray, errors: np.ndarray):
        self.violations = violations
        self.errors = errors


def batch_indicators(preds: np.ndarray, gold: np.ndarray, tree: CategoryTree) -> Indicators:
    """Vectorized :func:`indicators` over class-index matrices."""
    errors = (preds != gold).astype(np.int64)
    violations = np.zeros((preds.shape[0], tree.depth - 1), dtype=np.int64)
    for l in range(2, tree.depth + 1):
        parents = tree.parent_index(l)[preds[:, l - 1]]
        violations[:, l - 2] = (parents != preds[:, l - 2])
    return Indicators(violations, errors)


class LossReport:
    """Per-sample and batch-mean terms of the hierarchical loss for one minibatch."""

    def __init__(
        self,
        lloss: np.ndarray,
        dloss: np.ndarray,
        indicators: Indicators,
        per_sample_J: np.ndarray,
        preds: np.ndarray,
        logit_grads: List[np.ndarray],
    ):
        self.lloss = lloss
        self.dloss = dloss
        self.indicators = indicators
        self.per_sample_J = per_sample_J
        self.J = float(np.mean(per_sample_J))
        self.preds = preds
        self.logit_grads = logit_grads

    @property
    def mean_lloss(self) -> np.ndarray:
        return self.lloss.mean(axis=0)

    @property
    def mean_dloss(self) -> np.ndarray:
        return self.dloss.mean(axis=0)

    @property
    def violations(self) -> np.ndarray:
        return self.indicators.violations

    @property
    def errors(self) -> np.ndarray:
        return self.indicators.errors


def hierarchical_loss(
    dists: Sequence[np.ndarray],
    gold: np.ndarray,
    tree: CategoryTree,
    config: LossConfig,
    frozen: Optional[Indicators] = None,
) -> LossReport:
    """Evaluate J for a minibatch together with its logit gradients.

    Args:
        dists: Per-layer distributions, each [batch x |l|]
        gold: Gold class indices [batch x L]
        tree: Category tree
        config: Loss weights and punishment mode
        frozen: Indicators to use instead of the ones implied by ``dists``

    Returns:
        LossReport: Terms, indicators and ∂J/∂logits per layer
    """
    depth = tree.depth
    gold = np.asarray(gold, dtype=np.int64)
    if len(dists) != depth or gold.ndim != 2 or gold.shape[1] != depth:
        raise ShapeError(f"Need {depth} distributions and gold indices [batch x {depth}]")
    batch = gold.shape[0]
    rows = np.arange(batch)
    for l, dist in enumerate(dists, start=1):
        if dist.shape != (batch, tree.layer_sizes()[l - 1]):
            raise ShapeError(f"Layer {l} distribution has shape {dist.shape}")
        if np.any(gold[:, l - 1] < 0) or np.any(gold[:, l - 1] >= dist.shape[1]):
            raise DataError(f"Gold class index out of range at layer {l}")

    preds = np.stack([np.argmax(d, axis=1) for d in dists], axis=1)
    ind = frozen if frozen is not None else batch_indicators(preds, gold, tree)
    lloss = np.stack(
        [-np.log(np.maximum(d[rows, gold[:, l]], PROB_FLOOR)) for l, d in enumerate(dists)],
        axis=1,
    )

    dloss = np.zeros((batch, depth - 1))
    # ∂dloss_l/∂lloss_{l-1} and ∂dloss_l/∂lloss_l per sample
    d_prev = np.zeros((batch, depth - 1))
    d_cur = np.zeros((batch, depth - 1))
    for l in range(2, depth + 1):
        e_prev = ind.violations[:, l - 2] * ind.errors[:, l - 2]
        e_cur = ind.violations[:, l - 2] * ind.errors[:, l - 1]
        if config.ploss_mode == PlossMode.CONSTANT:
            c = config.ploss_constant
            dloss[:, l - 2] = np.power(c, e_prev) * np.power(c, e_cur) - 1.0
        else:
            factor = np.exp(e_prev * lloss[:, l - 2] + e_cur * lloss[:, l - 1])
            dloss[:, l - 2] = factor - 1.0
            d_prev[:, l - 2] = factor * e_prev
            d_cur[:, l - 2] = factor * e_cur

    per_sample_J = per_sample_total(lloss, dloss, config)

    alphas = config.alphas(depth)
    betas = config.betas(depth)
    logit_grads = []
    for l in range(1, depth + 1):
        coef = np.full(batch, alphas[l - 1])
        if l >= 2:
            coef += betas[l - 2] * d_cur[:, l - 2]
        if l < depth:
            coef += betas[l - 1] * d_prev[:, l - 1]
        grad = dists[l - 1].copy()
        grad[rows, gold[:, l - 1]] -= 1.0
        logit_grads.append(grad * (coef / batch)[:, None])

    return LossReport(lloss, dloss, ind, per_sample_J, preds, logit_grads)
