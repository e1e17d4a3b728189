"""Randomized finite-difference check of the analytic gradient of J."""
from typing import Dict, List, Tuple

import numpy as np

from ..hierarchy import ROOT, CategoryTree
from ..loss import Indicators, hierarchical_loss
from ..model import DhcModel, build_model, model_backward, model_forward
from ..models.config import LossConfig, ModelConfig, PlossMode, ShareMode
from ..models.reports import GradcheckReport
from ..nncore import ParameterSet, Rng, finite_difference_grad, relative_error
from ..utils.logging import setup_logging

logger = setup_logging(__name__)

DEPTH = 3
MAX_CLASSES = 5
MAX_DIM = 8
BATCH = 4


def random_tree(rng: Rng, depth: int = DEPTH, max_classes: int = MAX_CLASSES) -> CategoryTree:
    """Random layered tree with at most ``max_classes`` nodes per layer."""
    layers: List[List[str]] = [[f"n1_{i}" for i in range(int(rng.integers(1, max_classes + 1)))]]
    parent_map: Dict[str, str] = {node: ROOT for node in layers[0]}
    for layer in range(2, depth + 1):
        parents = layers[-1]
        size = int(rng.integers(len(parents), max_classes + 1))
        # every parent gets one child, the rest are spread at random
        owners = list(parents) + [parents[int(rng.integers(0, len(parents)))]
                                  for _ in range(size - len(parents))]
        owners.sort(key=parents.index)
        nodes = [f"n{layer}_{i}" for i in range(size)]
        for node, owner in zip(nodes, owners):
            parent_map[node] = owner
        layers.append(nodes)
    return CategoryTree(layers, parent_map)


def random_case(rng: Rng) -> Tuple[DhcModel, np.ndarray, np.ndarray, LossConfig, Indicators]:
    """One random network, batch, loss configuration and frozen indicator set."""
    tree = random_tree(rng)

    def dim() -> int:
        return int(rng.integers(2, MAX_DIM + 1))

    input_dim = dim()
    config = ModelConfig(
        input_dim=input_dim,
        base_hidden_dims=[dim() for _ in range(int(rng.integers(0, 3)))],
        root_dim=dim(),
        layer_dims=[dim() for _ in range(DEPTH)],
        share_mode=ShareMode.HIERARCHICAL if rng.random() < 0.5 else ShareMode.INDEPENDENT,
        rep_bias=bool(rng.random() < 0.5),
        head_bias=bool(rng.random() < 0.5),
    )
    model = build_model(tree, config, rng)
    # random biases in place of the zero init
    for name in model.params.names():
        if name.endswith(".b"):
            model.params[name][...] = rng.normal(model.params[name].shape, 0.1)

    X = rng.normal((BATCH, input_dim))
    gold = np.zeros((BATCH, DEPTH), dtype=np.int64)
    for row in range(BATCH):
        leaf = int(rng.integers(0, tree.layer_sizes()[-1]))
        gold[row, -1] = leaf
        for layer in range(DEPTH, 1, -1):
            gold[row, layer - 2] = tree.parent_index(layer)[gold[row, layer - 1]]

    loss = LossConfig(
        alpha=[float(a) for a in rng.uniform(0.2, 1.0, (DEPTH,))],
        beta=[float(b) for b in rng.uniform(0.2, 1.0, (DEPTH - 1,))],
        ploss_mode=PlossMode.ERROR,
    )
    frozen = Indicators(
        violations=(rng.random(BATCH * (DEPTH - 1)) < 0.5).astype(np.int64).reshape(BATCH, DEPTH - 1),
        errors=(rng.random(BATCH * DEPTH) < 0.5).astype(np.int64).reshape(BATCH, DEPTH),
    )
    return model, X, gold, loss, frozen


def check_case(
    model: DhcModel,
    X: np.ndarray,
    gold: np.ndarray,
    loss: LossConfig,
    frozen: Indicators,
    eps: float = 1e-6,
) -> Dict[str, float]:
    """Relative error between analytic and numeric gradients, per parameter."""
    params = model.params

    def objective(_: ParameterSet) -> float:
        return hierarchical_loss(model_forward(model, X).dists, gold, model.tree, loss, frozen).J

    params.zero_grad()
    trace = model_forward(model, X)
    report = hierarchical_loss(trace.dists, gold, model.tree, loss, frozen)
    model_backward(model, trace, logit_grads=report.logit_grads)
    analytic = {name: params.grads[name].copy() for name in params.names()}
    numeric = finite_difference_grad(objective, params, eps)
    return {name: relative_error(analytic[name], numeric[name]) for name in params.names()}


def run_gradcheck(
    seed: int = 0, trials: int = 20, eps: float = 1e-6, tolerance: float = 1e-5
) -> GradcheckReport:
    """Compare analytic and central-difference gradients on random configurations.

    Args:
        seed: Seed of the configuration generator
        trials: Number of random configurations
        eps: Finite-difference step
        tolerance: Largest acceptable relative error

    Returns:
        GradcheckReport: Worst relative error over every parameter of every trial
    """
    rng = Rng(seed)
    worst, worst_name = 0.0, ""
    for trial in range(trials):
        errors = check_case(*random_case(rng), eps=eps)
        name = max(errors, key=errors.get)
        logger.debug(f"Trial {trial}: max relative error {errors[name]:.3e} at {name}")
        if errors[name] >= worst:
            worst, worst_name = errors[name], f"trial {trial}: {name}"
    report = GradcheckReport(
        trials=trials, max_relative_error=worst, worst_parameter=worst_name, tolerance=tolerance
    )
    logger.info(
        f"Gradient check over {trials} configurations: max relative error {worst:.3e} "
        f"({worst_name}), {'passed' if report.passed else 'FAILED'}"
    )
    return report
