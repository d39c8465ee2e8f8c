"""Compiled kernels agree with the numpy fallback."""
import numpy as np
import pytest

from cyclefuse import _backend
from cyclefuse._fallback import abs_laplacian, analysis_rows, cross_correlate_valid, synthesis_rows
from cyclefuse.wavelet import Family, WaveletSpec

compiled = _backend.compiled
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def test_backend_selected():
    assert _backend.NAME in ("cython", "numpy")
    if compiled is not None and _backend.NAME == "numpy":
        import os

        assert os.environ.get("CYCLEFUSE_PURE_PYTHON")


@needs_compiled
@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("shape", [(1, 2), (3, 4), (7, 10), (16, 64)])
def test_filter_bank(family, shape, rng):
    lo, hi = WaveletSpec(family).filters
    x = rng.normal(size=shape)
    for got, want in zip(compiled.analysis_rows(x, lo, hi), analysis_rows(x, lo, hi)):
        np.testing.assert_allclose(got, want, atol=1e-12)
    a, d = analysis_rows(x, lo, hi)
    np.testing.assert_allclose(compiled.synthesis_rows(a, d, lo, hi), synthesis_rows(a, d, lo, hi), atol=1e-12)


@needs_compiled
@pytest.mark.parametrize("shape", [(1, 1), (1, 5), (3, 3), (20, 31)])
def test_laplacian(shape, rng):
    x = rng.uniform(0, 255, shape)
    np.testing.assert_allclose(compiled.abs_laplacian(x), abs_laplacian(x), atol=1e-12)


@needs_compiled
@pytest.mark.parametrize("rshape, tshape", [((10, 10), (3, 3)), ((40, 37), (9, 13)), ((12, 12), (12, 12)), ((20, 20), (1, 7))])
def test_cross_correlation(rshape, tshape, rng):
    r = rng.normal(size=rshape)
    t = rng.normal(size=tshape)
    np.testing.assert_allclose(compiled.cross_correlate_valid(r, t), cross_correlate_valid(r, t), atol=1e-9)


@needs_compiled
def test_direct_and_fft_routes_agree(rng):
    r = rng.normal(size=(120, 120))
    t = rng.normal(size=(80, 80))
    assert 41 * 41 * t.size > compiled.DIRECT_MAX_OPS
    np.testing.assert_allclose(compiled.cross_correlate_valid(r, t), compiled.cross_correlate_direct(r, t), atol=1e-9)


@needs_compiled
def test_cross_correlation_rejects_large_template():
    with pytest.raises(ValueError):
        compiled.cross_correlate_valid(np.zeros((4, 4)), np.zeros((5, 4)))
    with pytest.raises(ValueError):
        cross_correlate_valid(np.zeros((4, 4)), np.zeros((5, 4)))
