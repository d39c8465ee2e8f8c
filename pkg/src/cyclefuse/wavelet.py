"""Single-level periodic 2D Daubechies DWT.

Subband naming: the first letter is the filter applied down the columns
(vertical direction), the second the filter along the rows. So ``lh`` holds
horizontal detail (differences along x), ``hl`` vertical detail
(differences along y) and ``hh`` diagonal detail. For a 2x2 Haar block
``[[a, b], [c, d]]``::

    ll = (a + b + c + d) / 2
    lh = (a - b + c - d) / 2
    hl = (a + b - c - d) / 2
    hh = (a - b - c + d) / 2
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from cyclefuse._backend import kernels
from cyclefuse.image import GrayImage, PreconditionError, as_array

# Daubechies scaling filters (orthonormal normalization, sum = sqrt(2)).
_SCALING = {
    "db1": (0.70710678118654752440, 0.70710678118654752440),
    "db2": (
        0.48296291314453414337,
        0.83651630373780790558,
        0.22414386804201338103,
        -0.12940952255126038117,
    ),
    "db4": (
        0.23037781330889650086,
        0.71484657055291564709,
        0.63088076792985890788,
        -0.02798376941685985422,
        -0.18703481171909308408,
        0.03084138183556076363,
        0.03288301166688519973,
        -0.01059740178506903211,
    ),
}


class Family(str, enum.Enum):
    DB1 = "db1"
    DB2 = "db2"
    DB4 = "db4"


def _filters(family: Family) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array(_SCALING[family.value], dtype=np.float64)
    # quadrature mirror: hi[n] = (-1)^n lo[L-1-n]
    hi = lo[::-1] * np.where(np.arange(lo.size) % 2 == 0, 1.0, -1.0)
    return lo, hi


def check_orthonormal(lo: np.ndarray, hi: np.ndarray, tol: float = 1e-12) -> None:
    """Raise if (lo, hi) is not an orthonormal two-channel filter bank."""
    taps = lo.size
    for shift in range(0, taps, 2):
        want = 1.0 if shift == 0 else 0.0
        for a, b in ((lo, lo), (hi, hi)):
            if abs(np.dot(a[shift:], b[: taps - shift]) - want) > tol:
                raise AssertionError(f"filter bank not orthonormal at even shift {shift}")
        if abs(np.dot(lo[shift:], hi[: taps - shift])) > tol or abs(np.dot(hi[shift:], lo[: taps - shift])) > tol:
            raise AssertionError(f"lowpass/highpass not orthogonal at even shift {shift}")


_FILTERS = {f: _filters(f) for f in Family}
for _lo, _hi in _FILTERS.values():
    check_orthonormal(_lo, _hi)


@dataclass(frozen=True)
class WaveletSpec:
    family: Family = Family.DB2
    boundary: str = "periodic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.boundary != "periodic":
            raise ValueError("only periodic boundary extension is supported")

    @property
    def filters(self) -> tuple[np.ndarray, np.ndarray]:
        return _FILTERS[self.family]


@dataclass(frozen=True)
class SubbandSet:
    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray

    def __post_init__(self) -> None:
        shapes = {b.shape for b in (self.ll, self.lh, self.hl, self.hh)}
        if len(shapes) != 1:
            raise PreconditionError(f"subband dimension mismatch: {sorted(shapes)}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.ll.shape


def dwt2(image: GrayImage | np.ndarray, spec: WaveletSpec = WaveletSpec()) -> SubbandSet:
    x = np.ascontiguousarray(as_array(image), dtype=np.float64)
    h, w = x.shape
    if h % 2 or w % 2:
        raise PreconditionError(f"dwt2 needs even dimensions, got {w}x{h}; pad_even first")
    lo, hi = spec.filters
    row_lo, row_hi = kernels.analysis_rows(x, lo, hi)
    # column pass on the transposes
    ll, hl = kernels.analysis_rows(np.ascontiguousarray(row_lo.T), lo, hi)
    lh, hh = kernels.analysis_rows(np.ascontiguousarray(row_hi.T), lo, hi)
    return SubbandSet(ll=ll.T.copy(), lh=lh.T.copy(), hl=hl.T.copy(), hh=hh.T.copy())


def idwt2(subbands: SubbandSet, spec: WaveletSpec = WaveletSpec()) -> np.ndarray:
    lo, hi = spec.filters
    c = np.ascontiguousarray
    row_lo = kernels.synthesis_rows(c(subbands.ll.T), c(subbands.hl.T), lo, hi).T
    row_hi = kernels.synthesis_rows(c(subbands.lh.T), c(subbands.hh.T), lo, hi).T
    return kernels.synthesis_rows(c(row_lo), c(row_hi), lo, hi)


def pad_even(image: GrayImage) -> GrayImage:
    """Replicate the last row and/or column when a dimension is odd."""
    x = image.data
    h, w = x.shape
    if h % 2 == 0 and w % 2 == 0:
        return image
    return GrayImage(np.pad(x, ((0, h % 2), (0, w % 2)), mode="edge"))
