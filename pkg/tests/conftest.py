import numpy as np
import pytest
from scipy.ndimage import gaussian_filter

from cyclefuse import _backend

BACKENDS = [pytest.param(_backend.fallback, id="numpy")]
if _backend.compiled is not None:
    BACKENDS.insert(0, pytest.param(_backend.compiled, id="cython"))


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel implementation."""
    import cyclefuse.alignment
    import cyclefuse.saliency
    import cyclefuse.wavelet

    for mod in (cyclefuse.wavelet, cyclefuse.saliency, cyclefuse.alignment):
        monkeypatch.setattr(mod, "kernels", request.param)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def textured(rng, h, w, smooth=1.5):
    """Smoothed random texture on the [0, 255] scale with a well-defined NCC peak."""
    noise = rng.normal(size=(h, w))
    tex = gaussian_filter(noise, smooth, mode="wrap")
    tex = (tex - tex.min()) / (tex.max() - tex.min())
    return 20 + 215 * tex


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
