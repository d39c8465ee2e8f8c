# cython: language_level=3
"""Compiled inner loops.

Every function here has a numpy twin in ``_fallback`` with the same
signature; ``_backend`` picks one at import time.
"""
import numpy as np
from scipy.signal import fftconvolve

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def analysis_rows(const double[:, ::1] x, const double[::1] lo, const double[::1] hi):
    """Periodic filter-and-downsample of every row of ``x``.

    ``approx[r, k] = sum_n lo[n] * x[r, (2k + n) % N]`` and likewise for
    ``detail`` with ``hi``.
    """
    cdef Py_ssize_t rows = x.shape[0], n = x.shape[1], taps = lo.shape[0]
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t r, k, t, idx
    cdef double a, d, v
    approx = np.empty((rows, half), dtype=np.float64)
    detail = np.empty((rows, half), dtype=np.float64)
    cdef double[:, ::1] av = approx
    cdef double[:, ::1] dv = detail
    for r in range(rows):
        for k in range(half):
            a = 0.0
            d = 0.0
            idx = (2 * k) % n
            for t in range(taps):
                v = x[r, idx]
                a += lo[t] * v
                d += hi[t] * v
                idx += 1
                if idx == n:
                    idx = 0
            av[r, k] = a
            dv[r, k] = d
    return approx, detail


def synthesis_rows(const double[:, ::1] approx, const double[:, ::1] detail,
                   const double[::1] lo, const double[::1] hi):
    """Exact adjoint of :func:`analysis_rows` (its inverse for orthonormal filters)."""
    cdef Py_ssize_t rows = approx.shape[0], half = approx.shape[1], taps = lo.shape[0]
    cdef Py_ssize_t n = 2 * half
    cdef Py_ssize_t r, k, t, idx
    cdef double a, d
    out = np.zeros((rows, n), dtype=np.float64)
    cdef double[:, ::1] ov = out
    for r in range(rows):
        for k in range(half):
            a = approx[r, k]
            d = detail[r, k]
            idx = (2 * k) % n
            for t in range(taps):
                ov[r, idx] += lo[t] * a + hi[t] * d
                idx += 1
                if idx == n:
                    idx = 0
    return out


def abs_laplacian(const double[:, ::1] img):
    """|4-neighbour Laplacian| with replicated borders."""
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t y, x, ym, yp, xm, xp
    cdef double c
    out = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] ov = out
    for y in range(h):
        ym = y - 1 if y > 0 else 0
        yp = y + 1 if y < h - 1 else h - 1
        for x in range(w):
            xm = x - 1 if x > 0 else 0
            xp = x + 1 if x < w - 1 else w - 1
            c = img[y, x]
            ov[y, x] = fabs(img[ym, x] + img[yp, x] + img[y, xm] + img[y, xp] - 4.0 * c)
    return out


# above this many multiply-adds the FFT route wins over the direct loop
DIRECT_MAX_OPS = 10_000_000


def cross_correlate_valid(region, template):
    """``out[v, u] = sum(template * region[v:v+th, u:u+tw])`` over all valid offsets."""
    oh = region.shape[0] - template.shape[0] + 1
    ow = region.shape[1] - template.shape[1] + 1
    if oh <= 0 or ow <= 0:
        raise ValueError("template larger than region")
    if oh * ow * template.size <= DIRECT_MAX_OPS:
        return cross_correlate_direct(np.ascontiguousarray(region), np.ascontiguousarray(template))
    return fftconvolve(region, template[::-1, ::-1], mode="valid")


def cross_correlate_direct(const double[:, ::1] region, const double[:, ::1] template):
    cdef Py_ssize_t th = template.shape[0], tw = template.shape[1]
    cdef Py_ssize_t oh = region.shape[0] - th + 1, ow = region.shape[1] - tw + 1
    cdef Py_ssize_t v, u, i, j
    cdef double s0, s1, s2, s3
    cdef const double* rrow
    cdef const double* trow
    if oh <= 0 or ow <= 0:
        raise ValueError("template larger than region")
    out = np.empty((oh, ow), dtype=np.float64)
    cdef double[:, ::1] ov = out
    for v in range(oh):
        for u in range(ow):
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for i in range(th):
                rrow = &region[v + i, u]
                trow = &template[i, 0]
                j = 0
                while j + 3 < tw:
                    s0 += trow[j] * rrow[j]
                    s1 += trow[j + 1] * rrow[j + 1]
                    s2 += trow[j + 2] * rrow[j + 2]
                    s3 += trow[j + 3] * rrow[j + 3]
                    j += 4
                while j < tw:
                    s0 += trow[j] * rrow[j]
                    j += 1
            ov[v, u] = (s0 + s1) + (s2 + s3)
    return out
