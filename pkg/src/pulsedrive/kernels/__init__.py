"""Hot-kernel dispatch: compiled extension when built, NumPy fallback otherwise.

Both backends expose the same four functions with identical semantics:

    im2col(x, kh, kw, stride, pad)      -> (n*oh*ow, c*kh*kw) patch matrix
    col2im(cols, x_shape, kh, kw, stride, pad) -> NCHW scatter-add gradient
    maxpool_forward(x, window)          -> (pooled, flat argmax per window)
    maxpool_backward(dy, idx, x_shape, window) -> NCHW gradient

Set PULSEDRIVE_PURE=1 to force the NumPy fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy as _np_backend

if os.environ.get("PULSEDRIVE_PURE", "") not in ("", "0"):
    _impl = _np_backend
    BACKEND = "numpy"
else:
    try:
        from . import _ext as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _np_backend
        BACKEND = "numpy"

conv_out_size = _np_backend.conv_out_size

_SUPPORTED = (np.float32, np.float64)


def _check_dtype(arr: np.ndarray) -> np.ndarray:
    if arr.dtype.type not in _SUPPORTED:
        raise TypeError(f"kernels support float32/float64, got {arr.dtype}")
    return np.ascontiguousarray(arr)


def im2col(x: np.ndarray, kh: int, kw: int, stride: int, pad: int) -> np.ndarray:
    return _impl.im2col(_check_dtype(x), kh, kw, stride, pad)


def col2im(cols: np.ndarray, x_shape, kh: int, kw: int, stride: int, pad: int) -> np.ndarray:
    return _impl.col2im(_check_dtype(cols), tuple(x_shape), kh, kw, stride, pad)


def maxpool_forward(x: np.ndarray, window: int):
    return _impl.maxpool_forward(_check_dtype(x), window)


def maxpool_backward(dy: np.ndarray, idx: np.ndarray, x_shape, window: int) -> np.ndarray:
    return _impl.maxpool_backward(
        _check_dtype(dy), np.ascontiguousarray(idx, dtype=np.int64), tuple(x_shape), window
    )
