import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.ndimage import convolve

from cyclefuse.image import PreconditionError
from cyclefuse.saliency import adjust_saliency, fusion_weights, pool2, saliency_map

import oracles

KERNEL = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], dtype=float)


def test_constant_image(backend):
    np.testing.assert_array_equal(saliency_map(np.full((5, 7), 99.0)), np.zeros((5, 7)))


def test_single_peak(backend):
    x = np.zeros((3, 3))
    x[1, 1] = 4
    np.testing.assert_allclose(oracles.abs_laplacian_loops(x), [[0, 4, 0], [4, 16, 4], [0, 4, 0]])
    np.testing.assert_allclose(
        saliency_map(x), [[0, 63.75, 0], [63.75, 255, 63.75], [0, 63.75, 0]], atol=1e-12
    )


def test_ramp_interior_is_zero(backend):
    x = np.tile(np.arange(8.0), (6, 1))
    lap = np.abs(convolve(x, KERNEL, mode="nearest"))
    assert np.all(lap[:, 1:-1] == 0)
    # only the replicated left/right borders respond; they tie for the maximum
    np.testing.assert_allclose(saliency_map(x), lap / lap.max() * 255)
    assert np.all(saliency_map(x)[:, 1:-1] == 0)


def test_matches_convolution_oracle(backend, rng):
    x = rng.uniform(0, 255, (17, 23))
    lap = np.abs(convolve(x, KERNEL, mode="nearest"))
    np.testing.assert_allclose(saliency_map(x), lap / lap.max() * 255, rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(backend.abs_laplacian(x), oracles.abs_laplacian_loops(x), atol=1e-9)


def test_saliency_range_and_shift_invariance(backend, rng):
    x = rng.uniform(0, 200, (12, 9))
    s = saliency_map(x)
    assert s.min() >= 0 and s.max() == pytest.approx(255)
    np.testing.assert_allclose(saliency_map(x + 37.0), s, atol=1e-9)


def test_saliency_too_small():
    with pytest.raises(PreconditionError):
        saliency_map(np.zeros((2, 5)))


@pytest.mark.parametrize(
    "value, want",
    [(0.0, 0.0), (255.0, math.e - 1), (127.5, 0.648721270700128)],
)
def test_adjust_saliency(value, want):
    assert adjust_saliency(np.array([value]))[0] == pytest.approx(want, abs=1e-12)


def test_adjust_rejects_out_of_range():
    with pytest.raises(PreconditionError):
        adjust_saliency(np.array([256.0]))


def test_weight_examples():
    s = np.full((4, 4), 0.7)
    w = fusion_weights(s, s)
    assert np.all(w.w1 == 0.5) and np.all(w.w2 == 0.5)
    w = fusion_weights(np.zeros((4, 4)), np.full((4, 4), 0.3))
    assert np.all(w.w1 == 0) and np.all(w.w2 == 1)
    w = fusion_weights(np.ones((2, 2)), np.full((2, 2), 3.0))
    assert w.w1[0, 0] == pytest.approx(0.25) and w.w2[0, 0] == pytest.approx(0.75)
    w = fusion_weights(np.zeros((2, 2)), np.zeros((2, 2)))
    assert w.w1[0, 0] == w.w2[0, 0] == 0.5


def test_pooling_is_2x2_mean():
    x = np.arange(16.0).reshape(4, 4)
    np.testing.assert_array_equal(pool2(x), [[2.5, 4.5], [10.5, 12.5]])
    w = fusion_weights(np.array([[4.0, 0.0], [0.0, 0.0]]), np.ones((2, 2)))
    assert w.w1[0, 0] == pytest.approx(1.0 / 2.0)  # pooled 1.0 vs 1.0


def test_weight_errors():
    with pytest.raises(PreconditionError):
        fusion_weights(np.zeros((2, 2)), np.zeros((4, 4)))
    with pytest.raises(PreconditionError):
        fusion_weights(np.zeros((3, 2)), np.zeros((3, 2)))
    with pytest.raises(PreconditionError):
        fusion_weights(-np.ones((2, 2)), np.ones((2, 2)))


sal = arrays(np.float64, (6, 8), elements=st.floats(0, math.e - 1))


@settings(max_examples=80, deadline=None)
@given(sal, sal, st.floats(1e-3, 1e3))
def test_weight_laws(s1, s2, k):
    w = fusion_weights(s1, s2)
    assert w.w1.shape == (3, 4)
    np.testing.assert_allclose(w.w1 + w.w2, 1.0, atol=1e-12)
    assert w.w1.min() >= 0 and w.w1.max() <= 1 and w.w2.min() >= 0 and w.w2.max() <= 1
    ws = fusion_weights(k * s1, k * s2)
    np.testing.assert_allclose(ws.w1, w.w1, atol=1e-12)
    bumped = fusion_weights(s1 + 0.5, s2)
    assert np.all(bumped.w1 >= w.w1 - 1e-15)
