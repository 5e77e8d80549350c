"""Pure-NumPy implementations of the hot kernels.

Same contracts as the compiled extension; used when the extension is not
built or when PULSEDRIVE_PURE=1.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import as_strided


def conv_out_size(size: int, kernel: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - kernel) // stride + 1


def im2col(x: np.ndarray, kh: int, kw: int, stride: int, pad: int) -> np.ndarray:
    """Gather conv patches of NCHW input into a (n*oh*ow, c*kh*kw) matrix."""
    n, c, h, w = x.shape
    oh = conv_out_size(h, kh, stride, pad)
    ow = conv_out_size(w, kw, stride, pad)
    if pad > 0:
        xp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=x.dtype)
        xp[:, :, pad : pad + h, pad : pad + w] = x
    else:
        xp = x
    s0, s1, s2, s3 = xp.strides
    view = as_strided(
        xp,
        shape=(n, oh, ow, c, kh, kw),
        strides=(s0, s2 * stride, s3 * stride, s1, s2, s3),
        writeable=False,
    )
    return np.ascontiguousarray(view).reshape(n * oh * ow, c * kh * kw)


def col2im(
    cols: np.ndarray, x_shape: tuple, kh: int, kw: int, stride: int, pad: int
) -> np.ndarray:
    """Scatter-add the inverse of im2col back onto an NCHW gradient."""
    n, c, h, w = x_shape
    oh = conv_out_size(h, kh, stride, pad)
    ow = conv_out_size(w, kw, stride, pad)
    hp, wp = h + 2 * pad, w + 2 * pad
    xp = np.zeros((n, c, hp, wp), dtype=cols.dtype)
    cols6 = cols.reshape(n, oh, ow, c, kh, kw)
    for i in range(kh):
        i_end = i + stride * oh
        for j in range(kw):
            j_end = j + stride * ow
            xp[:, :, i:i_end:stride, j:j_end:stride] += cols6[:, :, :, :, i, j].transpose(
                0, 3, 1, 2
            )
    if pad > 0:
        return xp[:, :, pad : pad + h, pad : pad + w].copy()
    return xp


def maxpool_forward(x: np.ndarray, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Non-overlapping max pool; trailing rows/cols that do not fill a window
    are dropped. Returns pooled values and the flat in-window argmax."""
    n, c, h, w = x.shape
    k = window
    oh, ow = h // k, w // k
    xv = x[:, :, : oh * k, : ow * k].reshape(n, c, oh, k, ow, k)
    patches = np.ascontiguousarray(xv.transpose(0, 1, 2, 4, 3, 5)).reshape(
        n, c, oh, ow, k * k
    )
    idx = patches.argmax(axis=-1).astype(np.int64)
    y = np.take_along_axis(patches, idx[..., None], axis=-1)[..., 0]
    return y, idx


def maxpool_backward(
    dy: np.ndarray, idx: np.ndarray, x_shape: tuple, window: int
) -> np.ndarray:
    n, c, h, w = x_shape
    k = window
    oh, ow = h // k, w // k
    dpatches = np.zeros((n, c, oh, ow, k * k), dtype=dy.dtype)
    np.put_along_axis(dpatches, idx[..., None], dy[..., None], axis=-1)
    dx = np.zeros(x_shape, dtype=dy.dtype)
    dx[:, :, : oh * k, : ow * k] = (
        dpatches.reshape(n, c, oh, ow, k, k)
        .transpose(0, 1, 2, 4, 3, 5)
        .reshape(n, c, oh * k, ow * k)
    )
    return dx
