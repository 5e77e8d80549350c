"""Finite-difference verification of analytic gradients."""

from __future__ import annotations

import numpy as np

from .network import Network, mse_loss


def check_gradients(net: Network, x: np.ndarray, targets: np.ndarray,
                    h: float = 1e-5, dropout_seed: int = 0) -> float:
    """Compare backprop gradients against central finite differences.

    Every loss evaluation reuses the same dropout seed so the perturbed
    network stays a deterministic function of its parameters. Returns the
    max relative error over all parameter elements. float64 networks only.
    """
    if net.dtype != np.float64:
        raise ValueError("gradient checking requires a float64 network")

    def loss_of_current_params() -> float:
        pred = net.forward(x, training=True, rng=np.random.default_rng(dropout_seed))
        loss, _ = mse_loss(pred, np.asarray(targets, dtype=np.float64))
        return loss

    pred = net.forward(x, training=True, rng=np.random.default_rng(dropout_seed))
    _, dpred = mse_loss(pred, np.asarray(targets, dtype=np.float64))
    net.backward(dpred)
    analytic = [g.copy() for _, g in net.gradients()]

    worst = 0.0
    for (_, param), ana in zip(net.parameters(), analytic):
        flat = param.reshape(-1)
        ana_flat = ana.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            lp = loss_of_current_params()
            flat[i] = orig - h
            lm = loss_of_current_params()
            flat[i] = orig
            num = (lp - lm) / (2.0 * h)
            denom = max(abs(num) + abs(ana_flat[i]), 1e-8)
            worst = max(worst, abs(num - ana_flat[i]) / denom)
    return worst
