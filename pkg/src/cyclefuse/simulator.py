"""Synthetic rolling-contact tactile sequences.

Physical model (an invented, qualitative stand-in for sensor captures):

* a cylindrical elastomer pressed on a plane is deepest under its contact
  line and shallow towards the sides; depth across the rolling axis follows
  the parabolic chord approximation ``w(x) = max(0, 1 - ((x - c)/H)**2)``;
* response is linear in depth: ``I = B + A * mask * w(x)``;
* pixels away from the focal band defocus, with Gaussian blur
  ``sigma(x) = blur_sigma_max * (1 - w(x))``;
* additive Gaussian sensor noise, then clip and 8-bit quantization.

Between frames the contact line advances by ``roll_step`` while the object
slides back by ``roll_step`` in the image. The pattern's horizontal
distance to the contact line therefore shrinks by ``2 * roll_step`` per
frame; the last frame is the one where the pattern sits closest to it.

Noise comes from numpy's PCG64 seeded by ``SeedSequence(seed).spawn``, one
substream per frame index, turned into normals with the Box-Muller
transform, so frames can be rendered independently without changing bytes.
"""
from __future__ import annotations

import enum
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from scipy.ndimage import gaussian_filter

from cyclefuse.image import GrayImage, PreconditionError, SequenceManifest, read_pgm, write_pgm

# horizontal gap between the pattern and the contact line in the last frame, as a fraction of width
FINAL_GAP = 0.075
# blur sigmas are quantized to this step so each level is filtered once per frame
SIGMA_STEP = 0.25


class Pattern(str, enum.Enum):
    POINT = "point"
    LINE = "line"
    CURVE = "curve"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SceneSpec:
    pattern: Pattern = Pattern.POINT
    width: int = 640
    height: int = 480
    frames: int = 4
    contact_halfwidth: float = 160.0
    amplitude: float = 60.0
    background: float = 60.0
    blur_sigma_max: float = 3.0
    noise_sigma: float = 2.0
    roll_step: int = 10
    seed: int = 42
    mask_path: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "pattern", Pattern(self.pattern))
        if self.width < 1 or self.height < 1:
            raise PreconditionError("scene dimensions must be positive")
        if self.frames < 1:
            raise PreconditionError("scene needs at least one frame")
        if self.contact_halfwidth < 1:
            raise PreconditionError("contact_halfwidth must be >= 1")
        if self.background < 0 or self.background + self.amplitude > 255 or self.amplitude < 0:
            raise PreconditionError("need 0 <= background and background + amplitude <= 255")
        if self.blur_sigma_max < 0 or self.noise_sigma < 0:
            raise PreconditionError("blur and noise sigmas must be non-negative")
        if self.seed < 0:
            raise PreconditionError("seed must be unsigned")
        if self.pattern is Pattern.CUSTOM and not self.mask_path:
            raise PreconditionError("custom pattern needs mask_path")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pattern"] = self.pattern.value
        return d


def contact_profile(x, center: float, halfwidth: float):
    """Relative contact depth: 1 under the contact line, 0 at and beyond +-halfwidth."""
    if halfwidth < 1:
        raise PreconditionError("halfwidth must be >= 1")
    r = (np.asarray(x, dtype=np.float64) - center) / halfwidth
    w = np.maximum(0.0, 1.0 - r * r)
    return float(w) if np.ndim(w) == 0 else w


def render_pattern_mask(spec: SceneSpec, dx: float = 0.0) -> np.ndarray:
    """Pattern mask centered in the image, translated horizontally by ``dx`` pixels."""
    h, w = spec.height, spec.width
    unit = float(min(w, h))
    if spec.pattern is Pattern.CUSTOM:
        try:
            img = read_pgm(spec.mask_path)
        except Exception as exc:
            raise PreconditionError(f"unreadable custom mask {spec.mask_path}: {exc}") from exc
        if img.shape != (h, w):
            raise PreconditionError(f"custom mask is {img.width}x{img.height}, scene is {w}x{h}")
        base = (img.data >= 128).astype(np.float64)
        shift = int(round(dx))
        out = np.zeros_like(base)
        if shift >= 0:
            out[:, shift:] = base[:, : w - shift] if shift < w else 0
        else:
            out[:, : w + shift] = base[:, -shift:] if -shift < w else 0
        return out
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    cx = (w - 1) / 2 + dx
    cy = (h - 1) / 2
    if spec.pattern is Pattern.POINT:
        r = 0.02 * unit
        mask = (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r
    elif spec.pattern is Pattern.LINE:
        half_t = 0.015 * unit / 2
        half_len = 0.15 * w
        mask = (np.abs(yy - cy) <= half_t) & (np.abs(xx - cx) <= half_len)
    else:
        half_t = 0.015 * unit / 2
        half_len = 0.15 * w
        rise = 0.15 * unit
        # half-cosine arc, peak at the center column
        arc_y = cy + rise / 2 - rise * np.cos(np.pi * (xx - cx) / (2 * half_len))
        mask = (np.abs(yy - arc_y) <= half_t) & (np.abs(xx - cx) <= half_len)
    return mask.astype(np.float64)


def frame_geometry(spec: SceneSpec, t: int) -> tuple[float, float]:
    """(pattern center x, contact center x) for frame ``t``."""
    mid = (spec.width - 1) / 2
    s = spec.roll_step
    pattern_x = mid + s * ((spec.frames - 1) / 2 - t)
    last_pattern_x = mid + s * ((spec.frames - 1) / 2 - (spec.frames - 1))
    # contact_x = t * s + offset, chosen so the final gap is FINAL_GAP * width
    offset = last_pattern_x - FINAL_GAP * spec.width - (spec.frames - 1) * s
    return pattern_x, t * s + offset


def _box_muller(rng: np.random.Generator, n: int) -> np.ndarray:
    pairs = (n + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1], keeps log finite
    u2 = rng.random(pairs)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])
    return z[:n]


def _variable_blur(img: np.ndarray, sigma_cols: np.ndarray) -> np.ndarray:
    levels = np.round(sigma_cols / SIGMA_STEP) * SIGMA_STEP
    out = img.copy()
    for level in np.unique(levels):
        if level <= 0:
            continue
        cols = levels == level
        out[:, cols] = gaussian_filter(img, level, mode="nearest", truncate=4.0)[:, cols]
    return out


def render_frame(spec: SceneSpec, t: int) -> GrayImage:
    pattern_x, contact_x = frame_geometry(spec, t)
    mid = (spec.width - 1) / 2
    mask = render_pattern_mask(spec, pattern_x - mid)
    w = contact_profile(np.arange(spec.width), contact_x, spec.contact_halfwidth)
    clean = spec.background + spec.amplitude * mask * w[None, :]
    if spec.blur_sigma_max > 0:
        clean = _variable_blur(clean, spec.blur_sigma_max * (1.0 - w))
    if spec.noise_sigma > 0:
        noise = _box_muller(_frame_rng(spec, t), clean.size)
        clean = clean + spec.noise_sigma * noise.reshape(clean.shape)
    q = np.floor(np.clip(clean, 0.0, 255.0) + 0.5)
    return GrayImage(q)


def _frame_rng(spec: SceneSpec, t: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed).spawn(t + 1)[t]))


def render_reference(spec: SceneSpec) -> GrayImage:
    """Unblurred full-depth pattern at frame 0's position: ``B + A * mask``."""
    pattern_x, _ = frame_geometry(spec, 0)
    mask = render_pattern_mask(spec, pattern_x - (spec.width - 1) / 2)
    return GrayImage(np.floor(spec.background + spec.amplitude * mask + 0.5))


def render_sequence(spec: SceneSpec) -> list[GrayImage]:
    return [render_frame(spec, t) for t in range(spec.frames)]


def generate_sequence(spec: SceneSpec, out_dir: str | os.PathLike) -> SequenceManifest:
    """Write ``frame_000.pgm``..., ``reference.pgm`` and ``manifest.json`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for t, frame in enumerate(render_sequence(spec)):
        name = f"frame_{t:03d}.pgm"
        write_pgm(frame, out / name)
        names.append(name)
    write_pgm(render_reference(spec), out / "reference.pgm")
    notes = "synthetic rolling contact; " + ", ".join(f"{k}={v}" for k, v in spec.to_dict().items())
    manifest = SequenceManifest(frames=names, pattern_label=spec.pattern.value, notes=notes, base_dir=out)
    manifest.save(out / "manifest.json")
    return manifest


def default_scene(pattern: str | Pattern = Pattern.POINT, **overrides) -> SceneSpec:
    return replace(SceneSpec(pattern=Pattern(pattern)), **overrides)
