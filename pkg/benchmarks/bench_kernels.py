"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from seqdisc._kernels import _fallback

try:
    from seqdisc._kernels import _core
except ImportError:
    _core = None


def cases(rng):
    phases = np.sort(rng.uniform(0, 2 * np.pi, 4096))
    a = rng.uniform(0, 2 * np.pi, 300)
    b = rng.uniform(0, 2 * np.pi, 300)
    cdf = np.cumsum(np.full(16, 1 / 16))
    cdf[-1] = 1.0
    return {
        "covering_arc(4096)": lambda k: k.covering_arc(phases, 1e-8),
        "phase_sumset(300x300)": lambda k: k.phase_sumset(a, b, 1e-12),
        "counter_uniforms(1e5)": lambda k: k.counter_uniforms(7, 0, 100_000),
        "sample_categorical(16, 1e5)": lambda k: k.sample_categorical(cdf, 7, 100_000),
    }


def time_it(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(pure):
    code = ("import time; from seqdisc.verify import subadditivity_sweep; t = time.perf_counter(); "
            "subadditivity_sweep(3, 2000, 0); print(time.perf_counter() - t)")
    env = dict(os.environ)
    if pure:
        env["SEQDISC_PURE_PYTHON"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':30s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, call in cases(rng).items():
        py = time_it(lambda: call(_fallback), args.repeat) * 1e3
        if _core is None:
            print(f"{name:30s} {py:12.3f} {'n/a':>12s}")
            continue
        cy = time_it(lambda: call(_core), args.repeat) * 1e3
        print(f"{name:30s} {py:12.3f} {cy:12.3f} {py / cy:7.1f}x")
    py, cy = end_to_end(True), end_to_end(False)
    print(f"{'subadditivity sweep (d=3, 2000)':30s} {py * 1e3:12.1f} {cy * 1e3:12.1f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
