"""Integer-translation registration by exhaustive zero-normalized cross-correlation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclefuse._backend import kernels
from cyclefuse.image import GrayImage, PreconditionError, as_array

MIN_TEMPLATE = 8
# Scores this close to the best are ties and resolved by the displacement order.
TIE_TOL = 1e-9


@dataclass(frozen=True)
class Shift:
    """Translation to apply to the moving image; ``score`` is the NCC peak."""

    dx: int
    dy: int
    score: float = 0.0


def _window_sums(a: np.ndarray, th: int, tw: int) -> np.ndarray:
    c = np.zeros((a.shape[0] + 1, a.shape[1] + 1))
    c[1:, 1:] = a.cumsum(axis=0).cumsum(axis=1)
    return c[th:, tw:] - c[:-th, tw:] - c[th:, :-tw] + c[:-th, :-tw]


def ncc_surface(
    reference: np.ndarray, template: np.ndarray, top: int, left: int, max_shift: int
) -> np.ndarray:
    """NCC of ``template`` against every window of ``reference`` displaced by at most
    ``max_shift`` from ``(top, left)``. Entry ``[v + m, u + m]`` is displacement (u, v).

    Zero-variance template or window scores 0.
    """
    th, tw = template.shape
    m = max_shift
    region = reference[top - m: top + th + m, left - m: left + tw + m]
    region = region - region.mean()
    t = template - template.mean()
    n = th * tw
    t_energy = float(np.sum(t * t))
    scores = np.zeros((2 * m + 1, 2 * m + 1))
    scale = 1.0 + float(np.mean(region * region))
    if t_energy <= 1e-9 * n * (1.0 + float(np.mean(template * template))):
        return scores
    cross = kernels.cross_correlate_valid(np.ascontiguousarray(region), np.ascontiguousarray(t))
    s1 = _window_sums(region, th, tw)
    s2 = _window_sums(region * region, th, tw)
    w_energy = s2 - s1 * s1 / n
    ok = w_energy > 1e-9 * n * scale
    denom = np.sqrt(t_energy * np.where(ok, w_energy, 1.0))
    scores[ok] = cross[ok] / denom[ok]
    return np.clip(scores, -1.0, 1.0)


def template_box(shape: tuple[int, int], template_frac: float) -> tuple[int, int, int]:
    """(top, left, side) of the central square template."""
    if not 0 < template_frac <= 1:
        raise PreconditionError(f"template_frac must lie in (0, 1], got {template_frac}")
    h, w = shape
    side = int(template_frac * min(h, w))
    if side < MIN_TEMPLATE:
        raise PreconditionError(f"template side {side} px below minimum {MIN_TEMPLATE}; image too small")
    return (h - side) // 2, (w - side) // 2, side


def estimate_shift(
    reference: GrayImage | np.ndarray,
    moving: GrayImage | np.ndarray,
    template_frac: float = 0.5,
    max_shift: int = 32,
) -> Shift:
    ref = as_array(reference)
    mov = as_array(moving)
    if ref.shape != mov.shape:
        raise PreconditionError(f"shape mismatch: reference {ref.shape} vs moving {mov.shape}")
    if max_shift < 0:
        raise PreconditionError("max_shift must be non-negative")
    top, left, side = template_box(mov.shape, template_frac)
    h, w = ref.shape
    if top - max_shift < 0 or left - max_shift < 0 or top + side + max_shift > h or left + side + max_shift > w:
        raise PreconditionError(
            f"template {side}px with search radius {max_shift}px does not fit a {w}x{h} image"
        )
    template = mov[top: top + side, left: left + side]
    scores = ncc_surface(ref, template, top, left, max_shift)
    best = scores.max()
    vs, us = np.nonzero(scores >= best - TIE_TOL)
    us = us - max_shift
    vs = vs - max_shift
    # tie-break: smallest |dx|+|dy|, then smallest dy, then smallest dx
    i = np.lexsort((us, vs, np.abs(us) + np.abs(vs)))[0]
    u, v = int(us[i]), int(vs[i])
    return Shift(dx=u, dy=v, score=float(scores[v + max_shift, u + max_shift]))


def apply_shift(image: GrayImage, shift: Shift) -> GrayImage:
    """Translate by whole pixels: ``out[y, x] = in[y - dy, x - dx]``, clamped at the borders."""
    x = image.data
    if shift.dx == 0 and shift.dy == 0:
        return image
    h, w = x.shape
    rows = np.clip(np.arange(h) - shift.dy, 0, h - 1)
    cols = np.clip(np.arange(w) - shift.dx, 0, w - 1)
    return GrayImage(x[np.ix_(rows, cols)])
