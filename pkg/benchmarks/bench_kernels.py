"""Benchmark the numba kernels against the pure-numpy fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N]

Compilation happens in a warmup call and is reported separately.
"""
import argparse
import time

import numpy as np

from qca import _kernels
from qca.matcore import random_skew
from qca.models import two_spin


def timeit(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def closure_case(n, seed=0):
    rng = np.random.default_rng(seed)
    return np.stack([random_skew(n, rng, traceless=True) for _ in range(2)])


def propagate_case(segments, seed=0):
    m = two_spin(1.0, 1.0, 1.1)
    rng = np.random.default_rng(seed)
    amps = rng.uniform(-10, 10, (segments, m.m))
    dts = rng.uniform(0.01, 1.0, segments)
    return m.drift, np.stack(m.controls), amps, dts


def run(name, numba_fn, numpy_fn, repeat):
    t0 = time.perf_counter()
    a = numba_fn()
    compile_s = time.perf_counter() - t0
    b = numpy_fn()
    if np.shape(a) != np.shape(b):
        raise AssertionError(f"{name}: backends disagree")
    t_nb, t_np = timeit(numba_fn, repeat), timeit(numpy_fn, repeat)
    print(f"{name:<28} numba {t_nb * 1e3:9.3f} ms   numpy {t_np * 1e3:9.3f} ms   "
          f"speedup {t_np / t_nb:6.2f}x   (first call {compile_s:.2f} s)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed")
    for n in (4, 6, 8, 10):
        g = closure_case(n)
        run(f"closure su({n})", lambda: _kernels.closure_numba(g, 1e-9),
            lambda: _kernels.closure_numpy(g, 1e-9), args.repeat)
    for segments in (4, 64, 1024):
        case = propagate_case(segments)
        run(f"propagate 4x4, {segments} seg", lambda: _kernels.propagate_numba(*case),
            lambda: _kernels.propagate_numpy(*case), args.repeat)


if __name__ == "__main__":
    main()
