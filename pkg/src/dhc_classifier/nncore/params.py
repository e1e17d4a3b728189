"""Parameters, gradient buffers and seeded initialization."""
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..utils.errors import ShapeError


class Rng:
    """Seeded generator; PCG64 streams are identical across platforms."""

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, low: float, high: float, shape: Tuple[int, ...]) -> np.ndarray:
        return self._gen.uniform(low, high, size=shape)

    def random(self, size: Optional[int] = None):
        return self._gen.random(size)

    def integers(self, low: int, high: int, size: Optional[int] = None):
        return self._gen.integers(low, high, size=size)

    def normal(self, shape: Tuple[int, ...], scale: float = 1.0) -> np.ndarray:
        return self._gen.normal(0.0, scale, size=shape)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def choice(self, n: int, size: int, replace: bool = False) -> np.ndarray:
        return self._gen.choice(n, size=size, replace=replace)


class ParameterSet:
    """Named parameters with matching gradient buffers.

    Optimizer state (momentum, Adam moments) is kept in ``slots`` keyed by
    ``(slot, name)``. ``step`` counts optimizer updates.
    """

    def __init__(self):
        self.values: Dict[str, np.ndarray] = {}
        self.grads: Dict[str, np.ndarray] = {}
        self.slots: Dict[Tuple[str, str], np.ndarray] = {}
        self.step = 0

    def add(self, name: str, value: np.ndarray) -> np.ndarray:
        if name in self.values:
            raise ShapeError(f"Parameter {name} already exists")
        value = np.array(value, dtype=np.float64)
        if value.ndim != 2:
            raise ShapeError(f"Parameter {name} must be 2-D, got {value.shape}")
        self.values[name] = value
        self.grads[name] = np.zeros_like(value)
        return value

    def __getitem__(self, name: str) -> np.ndarray:
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def __iter__(self) -> Iterator[str]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def names(self) -> List[str]:
        return list(self.values)

    def count(self) -> int:
        """Total number of scalar parameters."""
        return int(sum(v.size for v in self.values.values()))

    def accumulate(self, name: str, grad: np.ndarray) -> None:
        buffer = self.grads[name]
        if grad.shape != buffer.shape:
            raise ShapeError(f"Gradient for {name} has shape {grad.shape}, expected {buffer.shape}")
        buffer += grad

    def zero_grad(self) -> None:
        for buffer in self.grads.values():
            buffer.fill(0.0)

    def slot(self, slot: str, name: str) -> np.ndarray:
        key = (slot, name)
        if key not in self.slots:
            self.slots[key] = np.zeros_like(self.values[name])
        return self.slots[key]

    def copy(self) -> "ParameterSet":
        clone = ParameterSet()
        for name, value in self.values.items():
            clone.add(name, value.copy())
        clone.step = self.step
        return clone


def glorot_uniform(rng: Rng, fan_in: int, fan_out: int) -> np.ndarray:
    """Uniform draws from [-s, s], s = sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, (fan_in, fan_out))
