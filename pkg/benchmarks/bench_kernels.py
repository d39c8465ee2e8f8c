"""Compiled kernels against the numpy fallback, per kernel and end to end.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from cyclefuse import _backend, alignment, saliency, simulator, wavelet
from cyclefuse.fusion import FusionConfig, fold

MODULES = (wavelet, saliency, alignment)


def kernel_cases(rng):
    img = rng.uniform(0, 255, (480, 640))
    lo, hi = wavelet.WaveletSpec().filters
    a, d = _backend.fallback.analysis_rows(img, lo, hi)
    region = rng.normal(size=(304, 304))
    tmpl = rng.normal(size=(240, 240))
    return {
        "analysis_rows 480x640 db2": lambda k: k.analysis_rows(img, lo, hi),
        "synthesis_rows 480x320 db2": lambda k: k.synthesis_rows(a, d, lo, hi),
        "abs_laplacian 480x640": lambda k: k.abs_laplacian(img),
        "cross_correlate 304^2 by 240^2": lambda k: k.cross_correlate_valid(region, tmpl),
    }


def use(kernels) -> None:
    for mod in MODULES:
        mod.kernels = kernels


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    impls = {"numpy": _backend.fallback}
    if _backend.compiled is not None:
        impls = {"cython": _backend.compiled, **impls}
    else:
        print("compiled kernels unavailable; timing the fallback only")

    rng = np.random.default_rng(0)
    frames = simulator.render_sequence(simulator.default_scene("point", frames=6))
    rows = [(name, {k: best_of(lambda: fn(impl), args.repeat) for k, impl in impls.items()})
            for name, fn in kernel_cases(rng).items()]
    end_to_end = {}
    for key, impl in impls.items():
        use(impl)
        end_to_end[key] = best_of(lambda: fold(frames, FusionConfig()), args.repeat)
    use(_backend.kernels)
    rows.append(("fold 6 frames 640x480", end_to_end))

    header = f"{'case':34s}" + "".join(f"{k:>12s}" for k in impls) + ("     speedup" if len(impls) > 1 else "")
    print(header)
    for name, times in rows:
        line = f"{name:34s}" + "".join(f"{times[k] * 1e3:10.2f}ms" for k in impls)
        if len(impls) > 1:
            line += f"{times['numpy'] / times['cython']:11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
