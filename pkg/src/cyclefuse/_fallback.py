"""Pure numpy implementations of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve


def analysis_rows(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = x.shape[1]
    base = np.arange(0, n, 2)
    approx = np.zeros((x.shape[0], n // 2))
    detail = np.zeros_like(approx)
    for t in range(lo.shape[0]):
        cols = x[:, (base + t) % n]
        approx += lo[t] * cols
        detail += hi[t] * cols
    return approx, detail


def synthesis_rows(
    approx: np.ndarray, detail: np.ndarray, lo: np.ndarray, hi: np.ndarray
) -> np.ndarray:
    half = approx.shape[1]
    n = 2 * half
    base = np.arange(0, n, 2)
    out = np.zeros((approx.shape[0], n))
    for t in range(lo.shape[0]):
        # (base + t) % n is a permutation of half the columns, so no index repeats within a tap
        out[:, (base + t) % n] += lo[t] * approx + hi[t] * detail
    return out


def abs_laplacian(img: np.ndarray) -> np.ndarray:
    p = np.pad(img, 1, mode="edge")
    lap = p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:] - 4.0 * img
    return np.abs(lap)


def cross_correlate_valid(region: np.ndarray, template: np.ndarray) -> np.ndarray:
    if template.shape[0] > region.shape[0] or template.shape[1] > region.shape[1]:
        raise ValueError("template larger than region")
    return fftconvolve(region, template[::-1, ::-1], mode="valid")
