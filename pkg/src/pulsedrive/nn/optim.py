"""Parameter updates: Adam (default) and plain SGD."""

from __future__ import annotations

import numpy as np


class NonFiniteGradientError(ValueError):
    pass


class Adam:
    """Standard Adam with bias correction (beta1=0.9, beta2=0.999, eps=1e-8)."""

    def __init__(self, params: list[np.ndarray], lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.lr = float(lr)
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.t = 0
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]

    def step(self, grads: list[np.ndarray]) -> None:
        if len(grads) != len(self.params):
            raise ValueError("gradient count does not match parameters")
        for g in grads:
            if not np.all(np.isfinite(g)):
                raise NonFiniteGradientError("non-finite gradient; update rejected")
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            g = g.astype(p.dtype, copy=False)
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            m_hat = m / bc1
            v_hat = v / bc2
            p -= (self.lr * m_hat / (np.sqrt(v_hat) + self.eps)).astype(p.dtype, copy=False)


class SGD:
    def __init__(self, params: list[np.ndarray], lr: float = 1e-2):
        self.params = params
        self.lr = float(lr)

    def step(self, grads: list[np.ndarray]) -> None:
        if len(grads) != len(self.params):
            raise ValueError("gradient count does not match parameters")
        for g in grads:
            if not np.all(np.isfinite(g)):
                raise NonFiniteGradientError("non-finite gradient; update rejected")
        for p, g in zip(self.params, grads):
            p -= (self.lr * g).astype(p.dtype, copy=False)
