"""Parameter update rules."""
import numpy as np

from ..models.config import OptimizerConfig, OptimizerType
from ..utils.errors import ConfigurationError
from .params import ParameterSet


def _check_lr(lr: float) -> None:
    if not lr > 0.0:
        raise ConfigurationError(f"Learning rate must be positive, got {lr}")


def sgd_step(params: ParameterSet, lr: float, momentum: float = 0.0) -> None:
    """Momentum SGD: ``v = momentum * v + g``; ``theta -= lr * v``."""
    _check_lr(lr)
    if not 0.0 <= momentum < 1.0:
        raise ConfigurationError(f"Momentum must lie in [0, 1), got {momentum}")
    for name, value in params.values.items():
        grad = params.grads[name]
        if momentum > 0.0:
            velocity = params.slot("velocity", name)
            velocity *= momentum
            velocity += grad
            value -= lr * velocity
        else:
            value -= lr * grad
    params.step += 1


def adam_step(
    params: ParameterSet,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """Adam with bias-corrected first and second moments."""
    _check_lr(lr)
    for label, beta in (("beta1", beta1), ("beta2", beta2)):
        if not 0.0 < beta < 1.0:
            raise ConfigurationError(f"Adam {label} must lie in (0, 1), got {beta}")
    if not eps > 0.0:
        raise ConfigurationError(f"Adam eps must be positive, got {eps}")

    t = params.step + 1
    correction1 = 1.0 - beta1 ** t
    correction2 = 1.0 - beta2 ** t
    for name, value in params.values.items():
        grad = params.grads[name]
        m = params.slot("adam_m", name)
        v = params.slot("adam_v", name)
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        value -= lr * m_hat / (np.sqrt(v_hat) + eps)
    params.step = t


class Optimizer:
    """Applies the configured update rule to a parameter set."""

    def __init__(self, config: OptimizerConfig):
        self.config = config
        _check_lr(config.lr)

    def step(self, params: ParameterSet) -> None:
        c = self.config
        if c.optimizer == OptimizerType.SGD:
            sgd_step(params, c.lr, c.momentum)
        else:
            adam_step(params, c.lr, c.adam_beta1, c.adam_beta2, c.adam_eps)
