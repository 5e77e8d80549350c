"""Sequential-network layers with explicit forward/backward passes.

Activations flow NCHW between spatial layers. Conv uses im2col + BLAS GEMM
with the gather/scatter handled by the kernel backend; the batch is chunked
so patch matrices stay within a fixed memory budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import kernels

# Patch-matrix budget per im2col call; keeps 84x84 conv batches off the heap cliff.
_COLS_BUDGET_BYTES = 64 << 20


@dataclass(frozen=True)
class LayerSpec:
    """Declarative layer description used for construction and serialization.

    kinds: conv2d(out_channels, kernel, stride), maxpool(window),
    dense(units), relu, dropout(rate), linear_output(units).
    """

    kind: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        checkers = {
            "conv2d": self._check_conv,
            "maxpool": self._check_pool,
            "dense": self._check_units,
            "linear_output": self._check_units,
            "relu": lambda: None,
            "dropout": self._check_dropout,
        }
        if self.kind not in checkers:
            raise ValueError(f"unknown layer kind {self.kind!r}")
        checkers[self.kind]()

    def _check_conv(self):
        for key in ("out_channels", "kernel", "stride"):
            if int(self.params.get(key, 0)) <= 0:
                raise ValueError(f"conv2d requires positive {key}")

    def _check_pool(self):
        if int(self.params.get("window", 0)) <= 0:
            raise ValueError("maxpool requires positive window")

    def _check_units(self):
        if int(self.params.get("units", 0)) <= 0:
            raise ValueError(f"{self.kind} requires positive units")

    def _check_dropout(self):
        rate = float(self.params.get("rate", -1.0))
        if not 0.0 < rate < 1.0:
            raise ValueError("dropout rate must be in (0,1)")


def conv2d(out_channels: int, kernel: int, stride: int = 1) -> LayerSpec:
    return LayerSpec("conv2d", {"out_channels": out_channels, "kernel": kernel, "stride": stride})


def maxpool(window: int = 2) -> LayerSpec:
    return LayerSpec("maxpool", {"window": window})


def dense(units: int) -> LayerSpec:
    return LayerSpec("dense", {"units": units})


def linear_output(units: int) -> LayerSpec:
    return LayerSpec("linear_output", {"units": units})


def relu() -> LayerSpec:
    return LayerSpec("relu")


def dropout(rate: float) -> LayerSpec:
    return LayerSpec("dropout", {"rate": rate})


class Layer:
    """Base layer. Subclasses fill in forward/backward and parameter dicts."""

    def forward(self, x: np.ndarray, training: bool, rng) -> np.ndarray:
        raise NotImplementedError

    def backward(self, dy: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def out_shape(self, in_shape: tuple) -> tuple:
        raise NotImplementedError

    def params(self) -> dict[str, np.ndarray]:
        return {}

    def grads(self) -> dict[str, np.ndarray]:
        return {}


class Conv2D(Layer):
    """2D convolution, half padding (same-size output at stride 1), He-uniform init."""

    def __init__(self, in_channels: int, out_channels: int, kernel: int, stride: int,
                 rng: np.random.Generator, dtype):
        self.ci, self.co, self.k, self.stride = in_channels, out_channels, kernel, stride
        self.pad = kernel // 2
        fan_in = in_channels * kernel * kernel
        limit = np.sqrt(6.0 / fan_in)
        self.w = rng.uniform(-limit, limit, size=(out_channels, in_channels, kernel, kernel)).astype(dtype)
        self.b = np.zeros(out_channels, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._x = None

    def out_shape(self, in_shape):
        c, h, w = in_shape
        if c != self.ci:
            raise ValueError(f"conv2d expected {self.ci} input channels, got {c}")
        oh = kernels.conv_out_size(h, self.k, self.stride, self.pad)
        ow = kernels.conv_out_size(w, self.k, self.stride, self.pad)
        if oh <= 0 or ow <= 0:
            raise ValueError("conv2d output collapsed to zero size")
        return (self.co, oh, ow)

    def _chunk(self, oh: int, ow: int, itemsize: int) -> int:
        per_sample = oh * ow * self.ci * self.k * self.k * itemsize
        return max(1, _COLS_BUDGET_BYTES // max(per_sample, 1))

    def forward(self, x, training, rng):
        n = x.shape[0]
        _, oh, ow = self.out_shape(x.shape[1:])
        w2 = self.w.reshape(self.co, -1)
        y = np.empty((n, self.co, oh, ow), dtype=x.dtype)
        step = self._chunk(oh, ow, x.dtype.itemsize)
        for lo in range(0, n, step):
            xc = x[lo : lo + step]
            cols = kernels.im2col(xc, self.k, self.k, self.stride, self.pad)
            out = cols @ w2.T
            out += self.b
            y[lo : lo + step] = out.reshape(xc.shape[0], oh, ow, self.co).transpose(0, 3, 1, 2)
        if training:
            self._x = x
        return y

    def backward(self, dy):
        x = self._x
        n = x.shape[0]
        oh, ow = dy.shape[2], dy.shape[3]
        w2 = self.w.reshape(self.co, -1)
        dw2 = np.zeros_like(w2)
        dx = np.empty_like(x)
        step = self._chunk(oh, ow, x.dtype.itemsize)
        for lo in range(0, n, step):
            xc = x[lo : lo + step]
            cols = kernels.im2col(xc, self.k, self.k, self.stride, self.pad)
            dy2 = np.ascontiguousarray(dy[lo : lo + step].transpose(0, 2, 3, 1)).reshape(-1, self.co)
            dw2 += dy2.T @ cols
            dcols = dy2 @ w2
            dx[lo : lo + step] = kernels.col2im(dcols, xc.shape, self.k, self.k, self.stride, self.pad)
        self.dw = dw2.reshape(self.w.shape)
        self.db = dy.sum(axis=(0, 2, 3))
        self._x = None
        return dx

    def params(self):
        return {"w": self.w, "b": self.b}

    def grads(self):
        return {"w": self.dw, "b": self.db}


class MaxPool2D(Layer):
    def __init__(self, window: int):
        self.window = window
        self._idx = None
        self._x_shape = None

    def out_shape(self, in_shape):
        c, h, w = in_shape
        oh, ow = h // self.window, w // self.window
        if oh <= 0 or ow <= 0:
            raise ValueError("maxpool output collapsed to zero size")
        return (c, oh, ow)

    def forward(self, x, training, rng):
        y, idx = kernels.maxpool_forward(x, self.window)
        if training:
            self._idx = idx
            self._x_shape = x.shape
        return y

    def backward(self, dy):
        dx = kernels.maxpool_backward(dy, self._idx, self._x_shape, self.window)
        self._idx = None
        return dx


class ReLU(Layer):
    def __init__(self):
        self._mask = None

    def out_shape(self, in_shape):
        return in_shape

    def forward(self, x, training, rng):
        y = np.maximum(x, 0)
        if training:
            self._mask = x > 0
        return y

    def backward(self, dy):
        dx = dy * self._mask
        self._mask = None
        return dx


class Dropout(Layer):
    """Inverted dropout: train-time scaling by 1/(1-rate), identity at eval."""

    def __init__(self, rate: float):
        self.rate = rate
        self._mask = None

    def out_shape(self, in_shape):
        return in_shape

    def forward(self, x, training, rng):
        if not training:
            return x
        if rng is None:
            raise ValueError("training-mode dropout requires an RNG")
        keep = 1.0 - self.rate
        mask = (rng.random(x.shape) < keep).astype(x.dtype)
        mask /= keep
        self._mask = mask
        return x * mask

    def backward(self, dy):
        dx = dy * self._mask
        self._mask = None
        return dx


class Dense(Layer):
    """Fully connected layer; flattens any input shape to (n, features)."""

    def __init__(self, in_features: int, units: int, rng: np.random.Generator, dtype):
        self.in_features = in_features
        self.units = units
        limit = np.sqrt(6.0 / in_features)
        self.w = rng.uniform(-limit, limit, size=(in_features, units)).astype(dtype)
        self.b = np.zeros(units, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._x2d = None
        self._in_shape = None

    def out_shape(self, in_shape):
        feats = int(np.prod(in_shape))
        if feats != self.in_features:
            raise ValueError(f"dense expected {self.in_features} features, got {feats}")
        return (self.units,)

    def forward(self, x, training, rng):
        x2d = x.reshape(x.shape[0], -1)
        y = x2d @ self.w + self.b
        if training:
            self._x2d = x2d
            self._in_shape = x.shape
        return y

    def backward(self, dy):
        self.dw = self._x2d.T @ dy
        self.db = dy.sum(axis=0)
        dx = (dy @ self.w.T).reshape(self._in_shape)
        self._x2d = None
        return dx

    def params(self):
        return {"w": self.w, "b": self.b}

    def grads(self):
        return {"w": self.dw, "b": self.db}
