# Compiled gather/scatter kernels for the NN engine. These are the inner
# loops that do not map onto BLAS: conv patch gathering (im2col), its
# scatter-add inverse (col2im), and max pooling with argmax bookkeeping.

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()

ctypedef fused real:
    float
    double


cpdef int conv_out_size(int size, int kernel, int stride, int pad):
    return (size + 2 * pad - kernel) // stride + 1


@cython.boundscheck(False)
@cython.wraparound(False)
def im2col(real[:, :, :, ::1] x, int kh, int kw, int stride, int pad):
    cdef int n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef int oh = conv_out_size(h, kh, stride, pad)
    cdef int ow = conv_out_size(w, kw, stride, pad)
    cdef int row_len = c * kh * kw

    if real is float:
        cols_arr = np.empty((n * oh * ow, row_len), dtype=np.float32)
    else:
        cols_arr = np.empty((n * oh * ow, row_len), dtype=np.float64)
    cdef real[:, ::1] cols = cols_arr

    cdef Py_ssize_t bi, oi, oj, ci, ki, kj, row
    cdef int ih, iw
    cdef real v
    for bi in range(n):
        for oi in range(oh):
            for oj in range(ow):
                row = (bi * oh + oi) * ow + oj
                for ci in range(c):
                    for ki in range(kh):
                        ih = oi * stride + ki - pad
                        for kj in range(kw):
                            iw = oj * stride + kj - pad
                            if 0 <= ih < h and 0 <= iw < w:
                                v = x[bi, ci, ih, iw]
                            else:
                                v = 0
                            cols[row, (ci * kh + ki) * kw + kj] = v
    return cols_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def col2im(real[:, ::1] cols, tuple x_shape, int kh, int kw, int stride, int pad):
    cdef int n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef int oh = conv_out_size(h, kh, stride, pad)
    cdef int ow = conv_out_size(w, kw, stride, pad)

    if real is float:
        dx_arr = np.zeros((n, c, h, w), dtype=np.float32)
    else:
        dx_arr = np.zeros((n, c, h, w), dtype=np.float64)
    cdef real[:, :, :, ::1] dx = dx_arr

    cdef Py_ssize_t bi, oi, oj, ci, ki, kj, row
    cdef int ih, iw
    for bi in range(n):
        for oi in range(oh):
            for oj in range(ow):
                row = (bi * oh + oi) * ow + oj
                for ci in range(c):
                    for ki in range(kh):
                        ih = oi * stride + ki - pad
                        if ih < 0 or ih >= h:
                            continue
                        for kj in range(kw):
                            iw = oj * stride + kj - pad
                            if 0 <= iw < w:
                                dx[bi, ci, ih, iw] += cols[row, (ci * kh + ki) * kw + kj]
    return dx_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def maxpool_forward(real[:, :, :, ::1] x, int window):
    cdef int n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef int k = window
    cdef int oh = h // k, ow = w // k

    if real is float:
        y_arr = np.empty((n, c, oh, ow), dtype=np.float32)
    else:
        y_arr = np.empty((n, c, oh, ow), dtype=np.float64)
    idx_arr = np.empty((n, c, oh, ow), dtype=np.int64)
    cdef real[:, :, :, ::1] y = y_arr
    cdef cnp.int64_t[:, :, :, ::1] idx = idx_arr

    cdef Py_ssize_t bi, ci, oi, oj, ki, kj
    cdef real best, v
    cdef cnp.int64_t best_at
    for bi in range(n):
        for ci in range(c):
            for oi in range(oh):
                for oj in range(ow):
                    best = x[bi, ci, oi * k, oj * k]
                    best_at = 0
                    for ki in range(k):
                        for kj in range(k):
                            v = x[bi, ci, oi * k + ki, oj * k + kj]
                            if v > best:
                                best = v
                                best_at = ki * k + kj
                    y[bi, ci, oi, oj] = best
                    idx[bi, ci, oi, oj] = best_at
    return y_arr, idx_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def maxpool_backward(real[:, :, :, ::1] dy, cnp.int64_t[:, :, :, ::1] idx,
                     tuple x_shape, int window):
    cdef int n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef int k = window
    cdef int oh = h // k, ow = w // k

    if real is float:
        dx_arr = np.zeros((n, c, h, w), dtype=np.float32)
    else:
        dx_arr = np.zeros((n, c, h, w), dtype=np.float64)
    cdef real[:, :, :, ::1] dx = dx_arr

    cdef Py_ssize_t bi, ci, oi, oj
    cdef cnp.int64_t at
    for bi in range(n):
        for ci in range(c):
            for oi in range(oh):
                for oj in range(ow):
                    at = idx[bi, ci, oi, oj]
                    dx[bi, ci, oi * k + at // k, oj * k + at % k] = dy[bi, ci, oi, oj]
    return dx_arr
