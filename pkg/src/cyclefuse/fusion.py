"""Saliency-weighted wavelet fusion of two images and its cyclic fold over a sequence.

The fold halves the low-frequency contribution of everything already in the
accumulator at each step, so with frames ``f0 .. f(n-1)`` frame 0 ends up
weighted ``1/2**(n-1)`` and frame ``k >= 1`` weighted ``1/2**(n-k)`` in the
approximation band. This recency bias is kept as-is.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from cyclefuse.alignment import Shift, apply_shift, estimate_shift
from cyclefuse.image import GrayImage, PreconditionError, as_array, remap_to_gray
from cyclefuse.saliency import adjust_saliency, fusion_weights, saliency_map
from cyclefuse.wavelet import SubbandSet, WaveletSpec, dwt2, idwt2, pad_even

# magnitudes closer than this count as tied under max selection; integer frames
# produce exact ties that roundoff would otherwise break arbitrarily
HF_TIE_TOL = 1e-9


@dataclass(frozen=True)
class FusionConfig:
    wavelet: WaveletSpec = field(default_factory=WaveletSpec)
    align: bool = True
    template_frac: float = 0.5
    max_shift: int = 32
    remap: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.template_frac <= 1:
            raise PreconditionError(f"template_frac must lie in (0, 1], got {self.template_frac}")
        if self.max_shift < 0:
            raise PreconditionError(f"max_shift must be >= 0, got {self.max_shift}")

    def to_dict(self) -> dict:
        return {
            "wavelet": self.wavelet.family.value,
            "align": self.align,
            "template_frac": self.template_frac,
            "max_shift": self.max_shift,
            "remap": self.remap,
        }


class AblationMode(str, enum.Enum):
    NO_WAVELET = "no_wavelet"
    LF_PICK_FIRST = "lf_pick_first"
    HF_MAX = "hf_max"

    @classmethod
    def parse(cls, text: str) -> "AblationMode":
        return cls(text.replace("-", "_"))


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise PreconditionError(f"cannot fuse {a.shape[1]}x{a.shape[0]} with {b.shape[1]}x{b.shape[0]}")


def _weights(a: np.ndarray, b: np.ndarray):
    return fusion_weights(adjust_saliency(saliency_map(a)), adjust_saliency(saliency_map(b)))


def _fuse_subbands(a: np.ndarray, b: np.ndarray, config: FusionConfig, mode: AblationMode | None) -> np.ndarray:
    spec = config.wavelet
    sa, sb = dwt2(a, spec), dwt2(b, spec)
    if mode is AblationMode.LF_PICK_FIRST:
        ll = sa.ll
    else:
        ll = 0.5 * (sa.ll + sb.ll)
    if mode is AblationMode.HF_MAX:
        def pick(x, y):
            return np.where(np.abs(y) > np.abs(x) + HF_TIE_TOL, y, x)
    else:
        wts = _weights(a, b)

        def pick(x, y):
            return x * wts.w1 + y * wts.w2
    fused = SubbandSet(ll=ll, lh=pick(sa.lh, sb.lh), hl=pick(sa.hl, sb.hl), hh=pick(sa.hh, sb.hh))
    return idwt2(fused, spec)


def fuse_pair(a: GrayImage | np.ndarray, b: GrayImage | np.ndarray, config: FusionConfig = FusionConfig()) -> np.ndarray:
    """Fuse two equally sized, even-dimensioned images; returns the un-remapped real result."""
    a, b = as_array(a), as_array(b)
    _check_pair(a, b)
    return _fuse_subbands(a, b, config, None)


def _pair_rule(mode: AblationMode | None, config: FusionConfig) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    if mode is AblationMode.NO_WAVELET:
        return lambda a, b: 0.5 * (a + b)
    return lambda a, b: _fuse_subbands(a, b, config, mode)


@dataclass
class FoldResult:
    image: GrayImage
    raw: np.ndarray
    shifts: list[Shift]


def fold(frames: Sequence[GrayImage], config: FusionConfig, mode: AblationMode | None = None) -> FoldResult:
    """Left fold of the pair rule over ``frames``.

    ``shifts[k]`` is the translation applied to frame ``k + 1`` before it
    was fused (zero when alignment is off).
    """
    if not frames:
        raise PreconditionError("cannot fuse an empty sequence")
    shape = frames[0].shape
    for i, f in enumerate(frames):
        if f.shape != shape:
            raise PreconditionError(
                f"frame {i} is {f.width}x{f.height}, expected {shape[1]}x{shape[0]}"
            )
    rule = _pair_rule(mode, config)
    acc = pad_even(frames[0]).data
    shifts: list[Shift] = []
    for frame in frames[1:]:
        frame = pad_even(frame)
        if config.align:
            # the snapshot only steers the shift search; acc stays unquantized
            shift = estimate_shift(remap_to_gray(acc), frame, config.template_frac, config.max_shift)
            frame = apply_shift(frame, shift)
        else:
            shift = Shift(0, 0, 0.0)
        shifts.append(shift)
        acc = rule(acc, frame.data)
    out = remap_to_gray(acc) if config.remap else GrayImage(np.clip(acc, 0.0, 255.0))
    return FoldResult(image=out, raw=acc, shifts=shifts)


def fuse_sequence(frames: Sequence[GrayImage], config: FusionConfig = FusionConfig()) -> GrayImage:
    return fold(frames, config).image


def ablate(frames: Sequence[GrayImage], mode: AblationMode | str, config: FusionConfig = FusionConfig()) -> GrayImage:
    """The cyclic fold with exactly one mechanism swapped out.

    ``no_wavelet`` averages pixels directly, ``lf_pick_first`` keeps the
    accumulator's approximation band, ``hf_max`` keeps the larger-magnitude
    detail coefficient.
    """
    if isinstance(mode, str):
        mode = AblationMode.parse(mode)
    return fold(frames, config, mode).image
