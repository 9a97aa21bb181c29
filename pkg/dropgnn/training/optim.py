"""Adam with a step learning-rate schedule."""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np


def step_decay(base_lr: float, epoch: int, factor: float = 0.5, every: int = 50) -> float:
    """lr after ``epoch // every`` decays by ``factor``."""
    return base_lr * factor ** (epoch // every)


class Adam:
    def __init__(self, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8) -> None:
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}

    def step(
        self, params: dict[str, np.ndarray], grads: Mapping[str, np.ndarray], lr: float
    ) -> None:
        """Update ``params`` in place, visiting names in sorted order."""
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for name in sorted(grads):
            g = grads[name]
            m = self._m.get(name, np.zeros_like(g))
            v = self._v.get(name, np.zeros_like(g))
            m = self.beta1 * m + (1.0 - self.beta1) * g
            v = self.beta2 * v + (1.0 - self.beta2) * g * g
            self._m[name], self._v[name] = m, v
            params[name] = params[name] - lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
