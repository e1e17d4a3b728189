"""The DHC network: flat base network, hierarchical embeddings and per-layer heads."""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..hierarchy import CategoryTree
from ..models.config import ModelConfig, ShareMode
from ..nncore import (
    DenseTrace,
    Matrix,
    ParameterSet,
    Rng,
    concat_rows,
    dense_backward,
    dense_forward,
    glorot_uniform,
    relu,
    relu_backward,
    softmax_backward,
    softmax_rows,
    split_columns,
)
from ..utils.errors import ConfigurationError, ShapeError
from ..utils.logging import setup_logging

logger = setup_logging(__name__)


class DhcModel:
    """All parameters θ of the network plus the dimensions they were built with."""

    def __init__(self, tree: CategoryTree, config: ModelConfig, params: ParameterSet):
        self.tree = tree
        self.config = config
        self.params = params
        self.input_dim = config.input_dim
        self.base_hidden_dims = list(config.base_hidden_dims)
        self.root_dim = config.root_dim
        self.layer_dims = config.dims_for(tree.depth)
        self.share_mode = ShareMode(config.share_mode)

    @property
    def depth(self) -> int:
        return self.tree.depth

    def rep_widths(self) -> List[int]:
        """width(R_l) for l = 1..L."""
        if self.share_mode == ShareMode.HIERARCHICAL:
            return list(np.cumsum(self.layer_dims).tolist())
        return list(self.layer_dims)

    def bias(self, prefix: str) -> Optional[np.ndarray]:
        name = f"{prefix}.b"
        return self.params[name] if name in self.params else None

    def predict_proba(self, X: Matrix, batch_size: int = 256) -> List[np.ndarray]:
        """Per-layer distributions for many inputs, computed in read-only batches."""
        X = np.asarray(X, dtype=np.float64)
        if X.shape[0] == 0:
            return [np.zeros((0, size)) for size in self.tree.layer_sizes()]
        chunks = [model_forward(self, X[i:i + batch_size]).dists
                  for i in range(0, X.shape[0], batch_size)]
        return [np.concatenate([c[l] for c in chunks], axis=0) for l in range(self.depth)]


class ForwardTrace:
    """Every intermediate of one forward pass, kept for the backward pass."""

    def __init__(self, x: Matrix, step: int):
        self.x = x
        self.step = step
        self.hidden_inputs: List[Matrix] = []
        self.hidden_pre: List[Matrix] = []
        self.root_input: Optional[Matrix] = None
        self.root: Optional[Matrix] = None
        self.rep_primes: List[Matrix] = []
        self.reps: List[Matrix] = []
        self.logits: List[Matrix] = []
        self.dists: List[Matrix] = []


def build_model(tree: CategoryTree, config: ModelConfig, rng: Rng) -> DhcModel:
    """Allocate and initialize every parameter.

    Draw order: base hidden layers, base root layer, per-layer projections,
    per-layer heads; weights before biases (biases start at zero).

    Args:
        tree: Category tree fixing depth and class counts
        config: Network dimensions and switches
        rng: Seeded generator

    Returns:
        DhcModel: Freshly initialized model
    """
    if tree.depth < 1:
        raise ConfigurationError("Tree depth must be at least 1")
    layer_dims = config.dims_for(tree.depth)
    dims = [config.input_dim, config.root_dim, *config.base_hidden_dims, *layer_dims]
    if any(d < 1 for d in dims):
        raise ConfigurationError(f"All dimensions must be >= 1, got {dims}")

    params = ParameterSet()

    def add_dense(prefix: str, fan_in: int, fan_out: int, bias: bool) -> None:
        params.add(f"{prefix}.W", glorot_uniform(rng, fan_in, fan_out))
        if bias:
            params.add(f"{prefix}.b", np.zeros((1, fan_out)))

    width = config.input_dim
    for k, hidden in enumerate(config.base_hidden_dims):
        add_dense(f"fnn.hidden{k}", width, hidden, True)
        width = hidden
    add_dense("fnn.root", width, config.root_dim, True)

    for l, d in enumerate(layer_dims, start=1):
        add_dense(f"hen.layer{l}", config.root_dim, d, config.rep_bias)

    model = DhcModel(tree, config, params)
    for l, (width, classes) in enumerate(zip(model.rep_widths(), tree.layer_sizes()), start=1):
        add_dense(f"head.layer{l}", width, classes, config.head_bias)

    logger.info(
        f"Built {model.share_mode.value} model with {params.count()} parameters "
        f"(layer dims {layer_dims}, rep widths {model.rep_widths()})"
    )
    return model


def _fnn(model: DhcModel, X: Matrix, trace: ForwardTrace) -> Matrix:
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise ShapeError(f"Input width {X.shape[-1]} != input_dim {model.input_dim}")
    h = X
    for k in range(len(model.base_hidden_dims)):
        prefix = f"fnn.hidden{k}"
        pre = dense_forward(h, model.params[f"{prefix}.W"], model.bias(prefix))
        trace.hidden_inputs.append(h)
        trace.hidden_pre.append(pre)
        h = relu(pre)
    trace.root_input = h
    trace.root = dense_forward(h, model.params["fnn.root.W"], model.bias("fnn.root"))
    return trace.root


def _hen(model: DhcModel, R0: Matrix, trace: ForwardTrace) -> Tuple[List[Matrix], List[Matrix]]:
    if R0.ndim != 2 or R0.shape[1] != model.root_dim:
        raise ShapeError(f"R_0 width {R0.shape[-1]} != root_dim {model.root_dim}")
    primes: List[Matrix] = []
    reps: List[Matrix] = []
    for l in range(1, model.depth + 1):
        prefix = f"hen.layer{l}"
        prime = dense_forward(R0, model.params[f"{prefix}.W"], model.bias(prefix))
        primes.append(prime)
        if model.share_mode == ShareMode.HIERARCHICAL and l > 1:
            reps.append(concat_rows([reps[-1], prime]))
        else:
            reps.append(prime)
    trace.rep_primes = primes
    trace.reps = reps
    return primes, reps


def _heads(model: DhcModel, reps: Sequence[Matrix], trace: ForwardTrace) -> List[Matrix]:
    if len(reps) != model.depth:
        raise ShapeError(f"Expected {model.depth} representations, got {len(reps)}")
    dists = []
    for l, rep in enumerate(reps, start=1):
        prefix = f"head.layer{l}"
        W = model.params[f"{prefix}.W"]
        if rep.shape[1] != W.shape[0]:
            raise ShapeError(f"R_{l} width {rep.shape[1]} != head input {W.shape[0]}")
        logits = dense_forward(rep, W, model.bias(prefix))
        trace.logits.append(logits)
        dists.append(softmax_rows(logits))
    trace.dists = dists
    return dists


def fnn_forward(model: DhcModel, X: Matrix) -> Matrix:
    """Root representation R_0 of a batch."""
    return _fnn(model, np.asarray(X, dtype=np.float64), ForwardTrace(X, model.params.step))


def hen_forward(model: DhcModel, R0: Matrix) -> Tuple[List[Matrix], List[Matrix]]:
    """Independent representations R'_l and hierarchical representations R_l."""
    return _hen(model, R0, ForwardTrace(R0, model.params.step))


def heads_forward(model: DhcModel, reps: Sequence[Matrix]) -> List[Matrix]:
    """Per-layer softmax distributions."""
    return _heads(model, reps, ForwardTrace(reps[0] if reps else None, model.params.step))


def model_forward(model: DhcModel, X: Matrix) -> ForwardTrace:
    """Full forward pass keeping every intermediate."""
    X = np.asarray(X, dtype=np.float64)
    trace = ForwardTrace(X, model.params.step)
    R0 = _fnn(model, X, trace)
    _, reps = _hen(model, R0, trace)
    _heads(model, reps, trace)
    return trace


def model_backward(
    model: DhcModel,
    trace: ForwardTrace,
    logit_grads: Optional[Sequence[Matrix]] = None,
    dist_grads: Optional[Sequence[Matrix]] = None,
) -> None:
    """Accumulate exact gradients of every parameter into ``model.params``.

    Exactly one of ``logit_grads`` (w.r.t. pre-softmax logits) or ``dist_grads``
    (w.r.t. the distributions ỹ_l) must be given.
    """
    if (logit_grads is None) == (dist_grads is None):
        raise ShapeError("Pass exactly one of logit_grads or dist_grads")
    if trace.step != model.params.step:
        raise ShapeError(
            f"Stale trace: produced at step {trace.step}, parameters at step {model.params.step}"
        )
    upstream = logit_grads if logit_grads is not None else dist_grads
    if len(upstream) != model.depth or len(trace.dists) != model.depth:
        raise ShapeError(f"Expected {model.depth} per-layer gradients, got {len(upstream)}")

    params = model.params
    rep_grads: List[Matrix] = []
    for l in range(1, model.depth + 1):
        g = np.asarray(upstream[l - 1], dtype=np.float64)
        probs = trace.dists[l - 1]
        if g.shape != probs.shape:
            raise ShapeError(f"Layer {l} gradient shape {g.shape} != {probs.shape}")
        dz = g if logit_grads is not None else softmax_backward(probs, g)
        prefix = f"head.layer{l}"
        W = params[f"{prefix}.W"]
        grad_rep, grad_W, grad_b = dense_backward(
            DenseTrace(trace.reps[l - 1], W, f"{prefix}.b" in params), dz
        )
        params.accumulate(f"{prefix}.W", grad_W)
        if grad_b is not None:
            params.accumulate(f"{prefix}.b", grad_b)
        rep_grads.append(grad_rep)

    # R_l = R_{l-1} ⊕ R'_l: the prefix block of dR_l flows into dR_{l-1}
    prime_grads: List[Matrix] = [None] * model.depth
    if model.share_mode == ShareMode.HIERARCHICAL:
        widths = model.rep_widths()
        carry = None
        for l in range(model.depth, 0, -1):
            g = rep_grads[l - 1] if carry is None else rep_grads[l - 1] + carry
            if l > 1:
                carry, prime_grads[l - 1] = split_columns(g, [widths[l - 2], model.layer_dims[l - 1]])
            else:
                prime_grads[0] = g
    else:
        prime_grads = rep_grads

    grad_root = np.zeros_like(trace.root)
    for l in range(1, model.depth + 1):
        prefix = f"hen.layer{l}"
        W = params[f"{prefix}.W"]
        grad_in, grad_W, grad_b = dense_backward(
            DenseTrace(trace.root, W, f"{prefix}.b" in params), prime_grads[l - 1]
        )
        params.accumulate(f"{prefix}.W", grad_W)
        if grad_b is not None:
            params.accumulate(f"{prefix}.b", grad_b)
        grad_root += grad_in

    grad_h, grad_W, grad_b = dense_backward(
        DenseTrace(trace.root_input, params["fnn.root.W"], True), grad_root
    )
    params.accumulate("fnn.root.W", grad_W)
    params.accumulate("fnn.root.b", grad_b)
    for k in range(len(model.base_hidden_dims) - 1, -1, -1):
        prefix = f"fnn.hidden{k}"
        grad_pre = relu_backward(trace.hidden_pre[k], grad_h)
        grad_h, grad_W, grad_b = dense_backward(
            DenseTrace(trace.hidden_inputs[k], params[f"{prefix}.W"], True), grad_pre
        )
        params.accumulate(f"{prefix}.W", grad_W)
        params.accumulate(f"{prefix}.b", grad_b)
