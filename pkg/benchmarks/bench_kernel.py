#!/usr/bin/env python3
"""Timing comparison of the jitted and pure-Python propagation kernels.

Runs the same representative propagations (a free oscillation, a complex
rotated oscillator, and a decaying-weight problem) through both kernel
builds and reports per-call times and the speedup.  The numba build is
skipped when numba is unavailable or NSSL_DISABLE_NUMBA is set.

Usage:  python benchmarks/bench_kernel.py [repeats]
"""

import sys
import time

import numpy as np

from nssl._kernels import KERNELS, NUMBA_ENABLED, compile_coeffs

CASES = [
    ("free oscillation, lam=4, [0, 30]",
     ("(1+0j)", "(0j)", "(1+0j)"), 4 + 0j, 0.0, 30.0),
    ("rotated oscillator, lam=30+10i, [0, 20]",
     ("(1+0j)", "((1+3j)*z*z)", "(1+0j)"), 30 + 10j, 0.0, 20.0),
    ("decaying weight, lam=10+10i, [0, 20]",
     ("(1+0j)", "((0.75+1j))", "cmath.exp(-3*z)"), 10 + 10j, 0.0, 20.0),
]


def run_case(kernel, cf, lam, x0, x1, repeats):
    y0 = np.array([0j, 1 + 0j], dtype=np.complex128)
    xs = np.empty(1, np.float64)
    ys = np.empty((1, 2), np.complex128)
    lss = np.empty(1, np.float64)
    # one untimed call to absorb jit compilation
    kernel(cf, lam, x0, x1, y0, 0.0, 1e-10, 1e-10, 0, xs, ys, lss)
    t0 = time.perf_counter()
    for _ in range(repeats):
        status, x, y, ls, nrec = kernel(cf, lam, x0, x1, y0, 0.0,
                                        1e-10, 1e-10, 0, xs, ys, lss)
    dt = (time.perf_counter() - t0) / repeats
    assert status == 0
    return dt


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    print(f"kernel builds: python"
          f"{', numba' if NUMBA_ENABLED else ' (numba unavailable or disabled)'}")
    print(f"{'case':<45}{'python':>12}{'numba':>12}{'speedup':>9}")
    for label, (p, q, w), lam, x0, x1 in CASES:
        fns = compile_coeffs(p, q, w)
        t_py = run_case(KERNELS["python"], fns.python, lam, x0, x1,
                        max(1, repeats // 10))
        if NUMBA_ENABLED:
            t_nb = run_case(KERNELS["numba"], fns.jitted, lam, x0, x1, repeats)
            print(f"{label:<45}{t_py * 1e3:>10.2f}ms{t_nb * 1e3:>10.3f}ms"
                  f"{t_py / t_nb:>8.0f}x")
        else:
            print(f"{label:<45}{t_py * 1e3:>10.2f}ms{'n/a':>12}{'':>9}")


if __name__ == "__main__":
    main()
