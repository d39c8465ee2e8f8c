"""Information entropy and multi-scale structural similarity."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.ndimage import correlate1d

from cyclefuse.image import GrayImage, PreconditionError, as_array, remap_to_gray, round_half_away

MS_SSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
WINDOW = 11
SIGMA = 1.5
K1, K2 = 0.01, 0.03
DYNAMIC_RANGE = 255.0


@dataclass
class MetricsReport:
    ie: float
    ms_ssim: float | None = None
    image_path: str | None = None
    reference_path: str | None = None

    def to_dict(self) -> dict:
        return {"ie": self.ie, "ms_ssim": self.ms_ssim, "image": self.image_path, "reference": self.reference_path}


def information_entropy(image: GrayImage | np.ndarray) -> float:
    """Shannon entropy in bits of the 256-bin gray histogram."""
    q = np.clip(round_half_away(as_array(image)), 0, 255).astype(np.int64)
    counts = np.bincount(q.ravel(), minlength=256)
    p = counts[counts > 0] / q.size
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0 else 0.0


def gaussian_window(size: int = WINDOW, sigma: float = SIGMA) -> np.ndarray:
    r = np.arange(size) - (size - 1) / 2
    g = np.exp(-(r * r) / (2 * sigma * sigma))
    return g / g.sum()


def _filter_valid(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Separable 'valid' filtering (no boundary padding)."""
    half = g.size // 2
    y = correlate1d(x, g, axis=0, mode="constant")[half: x.shape[0] - half]
    return correlate1d(y, g, axis=1, mode="constant")[:, half: x.shape[1] - half]


def _ssim_terms(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Mean luminance*contrast*structure and mean contrast*structure at one scale."""
    c1 = (K1 * DYNAMIC_RANGE) ** 2
    c2 = (K2 * DYNAMIC_RANGE) ** 2
    g = gaussian_window()
    mx, my = _filter_valid(x, g), _filter_valid(y, g)
    sxx = _filter_valid(x * x, g) - mx * mx
    syy = _filter_valid(y * y, g) - my * my
    sxy = _filter_valid(x * y, g) - mx * my
    cs = (2 * sxy + c2) / (sxx + syy + c2)
    lum = (2 * mx * my + c1) / (mx * mx + my * my + c1)
    return float(np.mean(lum * cs)), float(np.mean(cs))


def ssim(image: GrayImage | np.ndarray, reference: GrayImage | np.ndarray) -> float:
    x, y = as_array(image), as_array(reference)
    if x.shape != y.shape:
        raise PreconditionError(f"shape mismatch: {x.shape} vs {y.shape}")
    if min(x.shape) < WINDOW:
        raise PreconditionError(f"images must be at least {WINDOW}px on each side")
    return _ssim_terms(x, y)[0]


def _downsample(x: np.ndarray) -> np.ndarray:
    h, w = (x.shape[0] // 2) * 2, (x.shape[1] // 2) * 2
    return x[:h, :w].reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))


def scale_count(shape: tuple[int, int]) -> int:
    """Largest number of scales (<= 5) whose coarsest level still fits the window."""
    side = min(shape)
    n = 0
    while n < len(MS_SSIM_WEIGHTS) and side >= WINDOW:
        n += 1
        side //= 2
    return n


def ms_ssim(image: GrayImage | np.ndarray, reference: GrayImage | np.ndarray) -> float:
    """Five-scale MS-SSIM; fewer scales (weights renormalized) for images under 176 px."""
    x, y = as_array(image), as_array(reference)
    if x.shape != y.shape:
        raise PreconditionError(f"shape mismatch: {x.shape} vs {y.shape}")
    levels = scale_count(x.shape)
    if levels == 0:
        raise PreconditionError(f"images must be at least {WINDOW}px on each side")
    weights = np.array(MS_SSIM_WEIGHTS[:levels])
    weights /= weights.sum()
    result = 1.0
    for i, wt in enumerate(weights):
        full, cs = _ssim_terms(x, y)
        term = full if i == levels - 1 else cs
        # negative structure correlation has no real fractional power
        result *= max(term, 0.0) ** wt
        if i < levels - 1:
            x, y = _downsample(x), _downsample(y)
    return float(min(max(result, 0.0), 1.0))


def resize_nearest(image: GrayImage, shape: tuple[int, int]) -> GrayImage:
    h, w = shape
    if image.shape == (h, w):
        return image
    rows = np.minimum((np.arange(h) + 0.5) * image.height / h, image.height - 1).astype(int)
    cols = np.minimum((np.arange(w) + 0.5) * image.width / w, image.width - 1).astype(int)
    return GrayImage(image.data[np.ix_(rows, cols)])


@dataclass
class Comparison:
    fused: MetricsReport
    singles: list[MetricsReport]
    ie_ratio: float

    def to_dict(self) -> dict:
        return {
            "fused": self.fused.to_dict(),
            "singles": [s.to_dict() for s in self.singles],
            "ie_ratio": self.ie_ratio,
        }


def compare_methods(
    fused: GrayImage,
    singles: Sequence[GrayImage],
    reference: GrayImage | None = None,
    *,
    fused_path: str | None = None,
    single_paths: Sequence[str | None] | None = None,
    reference_path: str | None = None,
) -> Comparison:
    """IE and MS-SSIM for a fused image and the single frames it came from.

    Every image, reference included, is gray-normalized with
    :func:`remap_to_gray` first; the reference is nearest-neighbour resized
    to the fused image's dimensions.
    """
    if not singles:
        raise PreconditionError("compare_methods needs at least one single image")
    ref = None
    if reference is not None:
        ref = remap_to_gray(resize_nearest(reference, fused.shape))
    single_paths = list(single_paths) if single_paths is not None else [None] * len(singles)

    def report(img: GrayImage, path: str | None) -> MetricsReport:
        if img.shape != fused.shape:
            raise PreconditionError(f"image {path or ''} is {img.width}x{img.height}, expected {fused.width}x{fused.height}")
        g = remap_to_gray(img)
        return MetricsReport(
            ie=information_entropy(g),
            ms_ssim=ms_ssim(g, ref) if ref is not None else None,
            image_path=path,
            reference_path=reference_path,
        )

    fused_report = report(fused, fused_path)
    single_reports = [report(s, p) for s, p in zip(singles, single_paths)]
    best = max(r.ie for r in single_reports)
    ratio = fused_report.ie / best if best > 0 else 1.0
    return Comparison(fused=fused_report, singles=single_reports, ie_ratio=ratio)
