"""Laplacian saliency maps and the per-pixel fusion weights derived from them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclefuse._backend import kernels
from cyclefuse.image import GrayImage, PreconditionError, as_array


@dataclass(frozen=True)
class SaliencyWeights:
    """Weight maps at subband resolution; ``w1 + w2 == 1`` everywhere."""

    w1: np.ndarray
    w2: np.ndarray


def saliency_map(image: GrayImage | np.ndarray) -> np.ndarray:
    """|Laplacian| (4-neighbour, replicate borders) scaled so its maximum is 255.

    A perfectly flat image has no maximum to normalize by and yields zeros.
    """
    x = np.ascontiguousarray(as_array(image), dtype=np.float64)
    if x.shape[0] < 3 or x.shape[1] < 3:
        raise PreconditionError(f"saliency needs at least 3x3 pixels, got {x.shape[1]}x{x.shape[0]}")
    lap = kernels.abs_laplacian(x)
    peak = lap.max()
    if peak == 0:
        return np.zeros_like(lap)
    return lap / peak * 255.0


def adjust_saliency(sal: np.ndarray) -> np.ndarray:
    sal = np.asarray(sal, dtype=np.float64)
    if sal.size and (sal.min() < 0 or sal.max() > 255):
        raise PreconditionError("saliency values must lie in [0, 255]")
    return np.expm1(sal / 255.0)


def pool2(x: np.ndarray) -> np.ndarray:
    """Non-overlapping 2x2 mean pooling."""
    h, w = x.shape
    if h % 2 or w % 2:
        raise PreconditionError(f"2x2 pooling needs even dimensions, got {w}x{h}")
    return x.reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))


def fusion_weights(s1: np.ndarray, s2: np.ndarray) -> SaliencyWeights:
    """Weights from two full-resolution adjusted saliency maps.

    Both maps are pooled 2x2 to subband resolution before taking the
    ratio; where both pooled values are 0 the weights split evenly.
    """
    s1 = np.asarray(s1, dtype=np.float64)
    s2 = np.asarray(s2, dtype=np.float64)
    if s1.shape != s2.shape:
        raise PreconditionError(f"saliency shape mismatch: {s1.shape} vs {s2.shape}")
    if (s1.size and s1.min() < 0) or (s2.size and s2.min() < 0):
        raise PreconditionError("adjusted saliency must be non-negative")
    p1, p2 = pool2(s1), pool2(s2)
    total = p1 + p2
    w1 = np.full(total.shape, 0.5)
    np.divide(p1, total, out=w1, where=total > 0)
    return SaliencyWeights(w1=w1, w2=1.0 - w1)
