"""Grayscale raster type, binary PGM I/O, gray-level remapping and sequence manifests."""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ImageError(Exception):
    """Base class for image I/O failures."""


class MissingFile(ImageError, FileNotFoundError):
    pass


class MalformedHeader(ImageError, ValueError):
    pass


class UnsupportedMaxval(ImageError, ValueError):
    pass


class TruncatedPayload(ImageError, ValueError):
    pass


class PreconditionError(ValueError):
    """A pipeline input violates an operation's precondition."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Row-major grayscale raster, float64 on the nominal [0, 255] scale.

    The backing array is made read-only; derive new images instead of
    mutating.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise PreconditionError(f"GrayImage needs a non-empty 2D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise PreconditionError("GrayImage values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"GrayImage({self.width}x{self.height})"


def as_array(image: GrayImage | np.ndarray) -> np.ndarray:
    if isinstance(image, GrayImage):
        return image.data
    return np.asarray(image, dtype=np.float64)


def round_half_away(values: np.ndarray) -> np.ndarray:
    """Round to nearest integer, halves away from zero (numpy's ``round`` is half-to-even)."""
    return np.sign(values) * np.floor(np.abs(values) + 0.5)


_HEADER = re.compile(rb"\AP5\s+(\d+)\s+(\d+)\s+(\d+)\s")


def read_pgm(path: str | os.PathLike) -> GrayImage:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except FileNotFoundError as exc:
        raise MissingFile(f"{path}: no such file") from exc
    except IsADirectoryError as exc:
        raise MissingFile(f"{path}: is a directory") from exc
    m = _HEADER.match(raw)
    if m is None:
        raise MalformedHeader(f"{path}: not a binary PGM (expected 'P5 <w> <h> <maxval>')")
    width, height, maxval = (int(g) for g in m.groups())
    if width < 1 or height < 1:
        raise MalformedHeader(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedMaxval(f"{path}: maxval {maxval} unsupported (need 255)")
    payload = raw[m.end():]
    need = width * height
    if len(payload) < need:
        raise TruncatedPayload(f"{path}: payload has {len(payload)} bytes, expected {need}")
    pixels = np.frombuffer(payload, dtype=np.uint8, count=need).reshape(height, width)
    return GrayImage(pixels.astype(np.float64))


def to_bytes(image: GrayImage) -> np.ndarray:
    q = round_half_away(image.data)
    if q.min() < 0 or q.max() > 255:
        raise PreconditionError("image values must lie in [0, 255] to be written as 8-bit PGM")
    return q.astype(np.uint8)


def write_pgm(image: GrayImage, path: str | os.PathLike) -> None:
    pixels = to_bytes(image)
    header = f"P5\n{image.width} {image.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(pixels.tobytes())


def remap_to_gray(data: GrayImage | np.ndarray) -> GrayImage:
    """Min-max stretch onto [0, 255]; a constant input maps to mid-gray 128."""
    arr = as_array(data)
    if arr.size == 0:
        raise PreconditionError("cannot remap an empty matrix")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("cannot remap non-finite values")
    lo, hi = arr.min(), arr.max()
    if hi == lo:
        return GrayImage(np.full(arr.shape, 128.0))
    out = 255.0 * (arr - lo) / (hi - lo)
    # guard against 255.00000000000003 from rounding
    return GrayImage(np.clip(out, 0.0, 255.0))


@dataclass
class SequenceManifest:
    """Ordered frame files plus free-form acquisition metadata.

    Relative frame paths are resolved against ``base_dir`` (the manifest's
    own directory when loaded from disk).
    """

    frames: list[str]
    pattern_label: str = ""
    notes: str = ""
    base_dir: Path = field(default=Path("."), compare=False, repr=False)

    def frame_paths(self) -> list[Path]:
        return [Path(f) if Path(f).is_absolute() else self.base_dir / f for f in self.frames]

    def to_dict(self) -> dict:
        return {"frames": list(self.frames), "pattern_label": self.pattern_label, "notes": self.notes}

    def save(self, path: str | os.PathLike) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "SequenceManifest":
        path = Path(path)
        try:
            doc = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise MissingFile(f"{path}: no such file") from exc
        except json.JSONDecodeError as exc:
            raise MalformedHeader(f"{path}: invalid manifest JSON ({exc})") from exc
        frames = doc.get("frames") if isinstance(doc, dict) else None
        if not isinstance(frames, list) or not all(isinstance(f, str) for f in frames):
            raise MalformedHeader(f"{path}: manifest needs a 'frames' list of paths")
        return cls(
            frames=frames,
            pattern_label=str(doc.get("pattern_label", "")),
            notes=str(doc.get("notes", "")),
            base_dir=path.parent,
        )

    def load_frames(self) -> list[GrayImage]:
        """Decode every frame, enforcing a non-empty list of identical dimensions."""
        if not self.frames:
            raise PreconditionError("manifest lists no frames")
        images = []
        for p in self.frame_paths():
            img = read_pgm(p)
            if images and img.shape != images[0].shape:
                raise PreconditionError(
                    f"frame {p} is {img.width}x{img.height}, expected "
                    f"{images[0].width}x{images[0].height}"
                )
            images.append(img)
        return images
