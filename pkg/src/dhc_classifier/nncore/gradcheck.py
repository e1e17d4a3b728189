"""Central finite differences, the reference for analytic gradients."""
from typing import Callable, Dict

import numpy as np

from ..utils.errors import ConfigurationError
from .params import ParameterSet


def finite_difference_grad(
    f: Callable[[ParameterSet], float],
    params: ParameterSet,
    eps: float = 1e-6,
) -> Dict[str, np.ndarray]:
    """Numeric gradient of a scalar function of the parameters.

    Each coordinate is perturbed in place by ±eps and restored afterwards.

    Args:
        f: Deterministic scalar objective
        params: Parameters to differentiate with respect to
        eps: Perturbation size

    Returns:
        Dict[str, np.ndarray]: ``(f(θ+εe) - f(θ-εe)) / 2ε`` per coordinate
    """
    if not eps > 0.0:
        raise ConfigurationError(f"Finite-difference eps must be positive, got {eps}")
    grads: Dict[str, np.ndarray] = {}
    for name, value in params.values.items():
        grad = np.zeros_like(value)
        flat = value.reshape(-1)
        out = grad.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + eps
            plus = f(params)
            flat[i] = original - eps
            minus = f(params)
            flat[i] = original
            out[i] = (plus - minus) / (2.0 * eps)
        grads[name] = grad
    return grads


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """``|a - n| / max(1e-8, |a| + |n|)`` with Euclidean norms over the whole array."""
    diff = float(np.linalg.norm(np.asarray(analytic) - np.asarray(numeric)))
    scale = float(np.linalg.norm(analytic) + np.linalg.norm(numeric))
    return diff / max(1e-8, scale)
