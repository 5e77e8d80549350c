"""Sequential network: seeded construction from LayerSpecs, forward, backprop."""

from __future__ import annotations

import numpy as np

from .layers import Conv2D, Dense, Dropout, LayerSpec, MaxPool2D, ReLU


class Network:
    """Ordered layers built from specs with shape checking at construction.

    The same seed always produces bit-identical parameters. float64 is the
    reference dtype; float32 is the fast path (parameters are drawn in
    float64 and cast, so both dtypes share initial values).
    """

    def __init__(self, input_shape: tuple, specs: list[LayerSpec], seed: int,
                 dtype=np.float64):
        if len(input_shape) not in (1, 3):
            raise ValueError("input_shape must be (features,) or (c, h, w)")
        self.input_shape = tuple(int(s) for s in input_shape)
        self.specs = list(specs)
        self.seed = int(seed)
        self.dtype = np.dtype(dtype)
        if self.dtype.type not in (np.float32, np.float64):
            raise ValueError("dtype must be float32 or float64")

        rng = np.random.default_rng(self.seed)
        self.layers = []
        shape = self.input_shape
        for spec in self.specs:
            layer = self._build_layer(spec, shape, rng)
            self.layers.append(layer)
            shape = layer.out_shape(shape)
        self.output_shape = shape

    def _build_layer(self, spec: LayerSpec, in_shape: tuple, rng):
        p = spec.params
        if spec.kind == "conv2d":
            if len(in_shape) != 3:
                raise ValueError("conv2d requires a (c, h, w) input")
            return Conv2D(in_shape[0], int(p["out_channels"]), int(p["kernel"]),
                          int(p["stride"]), rng, self.dtype)
        if spec.kind == "maxpool":
            return MaxPool2D(int(p["window"]))
        if spec.kind in ("dense", "linear_output"):
            feats = int(np.prod(in_shape))
            return Dense(feats, int(p["units"]), rng, self.dtype)
        if spec.kind == "relu":
            return ReLU()
        if spec.kind == "dropout":
            return Dropout(float(p["rate"]))
        raise ValueError(f"unknown layer kind {spec.kind!r}")

    def _check_input(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != len(self.input_shape) + 1 or tuple(x.shape[1:]) != self.input_shape:
            raise ValueError(
                f"batch shape {x.shape} does not match input spec {self.input_shape}"
            )
        return np.ascontiguousarray(x, dtype=self.dtype)

    def forward(self, x: np.ndarray, training: bool = False, rng=None) -> np.ndarray:
        """Run the network. `rng` feeds dropout masks and is only consumed when
        training; eval-mode output is independent of it."""
        if isinstance(rng, (int, np.integer)):
            rng = np.random.default_rng(int(rng))
        h = self._check_input(x)
        for layer in self.layers:
            h = layer.forward(h, training, rng)
        return h

    def backward(self, dy: np.ndarray) -> np.ndarray:
        """Backpropagate after a training-mode forward; fills layer gradients
        and returns the input gradient."""
        g = np.ascontiguousarray(dy, dtype=self.dtype)
        for layer in reversed(self.layers):
            g = layer.backward(g)
        return g

    def parameters(self) -> list[tuple[str, np.ndarray]]:
        out = []
        for i, layer in enumerate(self.layers):
            for name, arr in layer.params().items():
                out.append((f"layer{i}.{name}", arr))
        return out

    def gradients(self) -> list[tuple[str, np.ndarray]]:
        out = []
        for i, layer in enumerate(self.layers):
            for name, arr in layer.grads().items():
                out.append((f"layer{i}.{name}", arr))
        return out

    def set_parameters(self, values: list[np.ndarray]) -> None:
        current = self.parameters()
        if len(values) != len(current):
            raise ValueError("parameter count mismatch")
        for (_, dst), src in zip(current, values):
            if dst.shape != src.shape:
                raise ValueError("parameter shape mismatch")
            dst[...] = src.astype(self.dtype, copy=False)

    def clone(self) -> "Network":
        other = Network(self.input_shape, self.specs, self.seed, self.dtype)
        other.set_parameters([arr for _, arr in self.parameters()])
        return other

    def param_count(self) -> int:
        return sum(arr.size for _, arr in self.parameters())


def mse_loss(pred: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean squared error over every batch element and output unit, plus the
    gradient with respect to the predictions."""
    if pred.shape != targets.shape:
        raise ValueError(f"target shape {targets.shape} != prediction shape {pred.shape}")
    diff = pred - targets
    loss = float(np.mean(diff * diff))
    dpred = (2.0 / diff.size) * diff
    return loss, dpred


def loss_and_gradients(net: Network, batch: np.ndarray, targets: np.ndarray,
                       training: bool = True, rng=None):
    """One forward/backward pass under MSE. Returns (loss, gradients) where
    gradients aligns with net.parameters()."""
    pred = net.forward(batch, training=training, rng=rng)
    targets = np.ascontiguousarray(targets, dtype=net.dtype)
    loss, dpred = mse_loss(pred, targets)
    net.backward(dpred)
    return loss, net.gradients()
