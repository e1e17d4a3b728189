"""Dense matrix operations with hand-derived backward passes.

All matrices are 2-D float64 numpy arrays, rows indexing the minibatch.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..utils.errors import NumericError, ShapeError

Matrix = np.ndarray


def as_matrix(x, name: str = "matrix") -> Matrix:
    """Coerce to a finite 2-D float64 array."""
    m = np.asarray(x, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericError(f"{name} contains non-finite values")
    return m


class DenseTrace:
    """Inputs of one dense_forward call, kept for the backward pass."""

    def __init__(self, x: Matrix, W: Matrix, has_bias: bool):
        self.x = x
        self.W = W
        self.has_bias = has_bias


def dense_forward(x: Matrix, W: Matrix, b: Optional[Matrix] = None) -> Matrix:
    """Affine map ``x @ W + b``.

    Args:
        x: Inputs [batch x in]
        W: Weights [in x out]
        b: Optional bias [out] or [1 x out]

    Returns:
        Output [batch x out]; callers keep a :class:`DenseTrace` for the backward pass
    """
    if x.ndim != 2 or W.ndim != 2 or x.shape[1] != W.shape[0]:
        raise ShapeError(f"dense_forward: cannot multiply {x.shape} by {W.shape}")
    out = x @ W
    if b is not None:
        b = b.reshape(1, -1)
        if b.shape[1] != W.shape[1]:
            raise ShapeError(f"dense_forward: bias width {b.shape[1]} != {W.shape[1]}")
        out = out + b
    return out


def dense_backward(
    trace: DenseTrace, upstream: Matrix
) -> Tuple[Matrix, Matrix, Optional[Matrix]]:
    """Chain-rule gradients of :func:`dense_forward`.

    Returns:
        (grad_x, grad_W, grad_b); grad_b is None when the forward had no bias
    """
    expected = (trace.x.shape[0], trace.W.shape[1])
    if upstream.shape != expected:
        raise ShapeError(f"dense_backward: upstream {upstream.shape} != output {expected}")
    grad_x = upstream @ trace.W.T
    grad_W = trace.x.T @ upstream
    grad_b = upstream.sum(axis=0, keepdims=True) if trace.has_bias else None
    return grad_x, grad_W, grad_b


def relu(x: Matrix) -> Matrix:
    """Elementwise max(0, x); the input doubles as the backward trace."""
    if not np.all(np.isfinite(x)):
        raise NumericError("relu: non-finite input")
    return np.maximum(x, 0.0)


def relu_backward(trace: Matrix, upstream: Matrix) -> Matrix:
    if upstream.shape != trace.shape:
        raise ShapeError(f"relu_backward: upstream {upstream.shape} != input {trace.shape}")
    return np.where(trace > 0.0, upstream, 0.0)


def softmax_rows(z: Matrix) -> Matrix:
    """Row-wise softmax with max subtraction."""
    if z.ndim != 2 or z.shape[1] < 1:
        raise ShapeError(f"softmax_rows: need [batch x k>=1], got {z.shape}")
    if not np.all(np.isfinite(z)):
        raise NumericError("softmax_rows: non-finite logits")
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_backward(probs: Matrix, upstream: Matrix) -> Matrix:
    """Logit gradient from a gradient with respect to the probabilities."""
    if upstream.shape != probs.shape:
        raise ShapeError(f"softmax_backward: upstream {upstream.shape} != {probs.shape}")
    inner = (upstream * probs).sum(axis=1, keepdims=True)
    return probs * (upstream - inner)


def concat_rows(parts: Sequence[Matrix]) -> Matrix:
    """Join per-sample blocks side by side, part i after parts 1..i-1."""
    if not parts:
        raise ShapeError("concat_rows: empty list")
    batch = parts[0].shape[0]
    for part in parts:
        if part.ndim != 2 or part.shape[0] != batch:
            raise ShapeError(f"concat_rows: batch mismatch {part.shape} vs {batch}")
    if len(parts) == 1:
        return parts[0]
    return np.concatenate(parts, axis=1)


def split_columns(upstream: Matrix, widths: Sequence[int]) -> List[Matrix]:
    """Backward of :func:`concat_rows`: slice a gradient into per-part blocks."""
    if sum(widths) != upstream.shape[1]:
        raise ShapeError(f"split_columns: widths {list(widths)} do not cover {upstream.shape[1]}")
    bounds = np.cumsum([0, *widths])
    return [upstream[:, bounds[i]:bounds[i + 1]] for i in range(len(widths))]
