#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

The three hot kernels are timed on representative problem sizes:

* synth:  oscillatory synthesis of a 2049-node spectrum on a time grid
* nudft:  quadrature transform of a time grid onto a frequency grid
* gram:   sinc kernel matrix over warped integer nodes

Usage:
    python benchmarks/bench_backends.py [--time-points 8001] [--freq-points 4001] [--gram-n 400] [--repeats 3]
"""

import argparse
import time

import numpy as np

from warpband import _kernels


def _best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def run(time_points: int, freq_points: int, gram_n: int, repeats: int) -> None:
    rng = np.random.default_rng(0)
    spectrum = (rng.standard_normal(2049) + 1j * rng.standard_normal(2049)) * 0.2
    dw = 2.0 / 2048
    t_grid = np.linspace(-200.0, 200.0, time_points).astype(complex)
    x = rng.standard_normal(time_points) + 1j * rng.standard_normal(time_points)
    omegas = np.linspace(-4.0, 4.0, freq_points)
    nodes = np.arange(-gram_n, gram_n + 1, dtype=float)
    warped = nodes**3 + nodes

    cases = {
        "synth": [
            ("numpy", lambda: _kernels._synth_numpy(spectrum, -1.0, dw, t_grid)),
        ],
        "nudft": [
            ("numpy", lambda: _kernels._nudft_numpy(x, -200.0, 400.0 / (time_points - 1), omegas)),
        ],
        "gram": [
            ("numpy", lambda: _kernels._sinc_gram_numpy(1.0, warped)),
        ],
    }
    if _kernels.backend() == "numba":
        out_s = np.empty(time_points, dtype=complex)
        out_f = np.empty(freq_points, dtype=complex)
        out_g = np.empty((nodes.size, nodes.size))
        cases["synth"].insert(
            0,
            ("numba", lambda: _kernels._synth_loop_impl(spectrum, -1.0, dw, t_grid, out_s)),
        )
        cases["nudft"].insert(
            0,
            (
                "numba",
                lambda: _kernels._nudft_loop_impl(
                    x, -200.0, 400.0 / (time_points - 1), omegas, out_f
                ),
            ),
        )
        cases["gram"].insert(
            0, ("numba", lambda: _kernels._sinc_gram_loop_impl(1.0, warped, out_g))
        )
        for impls in cases.values():
            impls[0][1]()  # JIT warm-up outside the timed region
    else:
        print("numba backend unavailable or disabled: timing the numpy path only")

    print(f"active backend: {_kernels.backend()}")
    print(f"{'kernel':<8} {'impl':<7} {'best of ' + str(repeats):>12}  speedup")
    for name, impls in cases.items():
        times = {}
        for impl_name, fn in impls:
            times[impl_name] = _best_of(repeats, fn)
        base = times.get("numpy")
        for impl_name, secs in times.items():
            speedup = f"{base / secs:6.2f}x" if impl_name == "numba" and base else "   ref"
            print(f"{name:<8} {impl_name:<7} {secs * 1e3:10.2f} ms  {speedup}")

    if "numba" in dict(cases["synth"]):
        a = _kernels._synth_numpy(spectrum, -1.0, dw, t_grid)
        out = np.empty(time_points, dtype=complex)
        _kernels._synth_loop_impl(spectrum, -1.0, dw, t_grid, out)
        print(f"cross-check max |numba - numpy| on synth: {np.max(np.abs(out - a)):.3e}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--time-points", type=int, default=8001)
    parser.add_argument("--freq-points", type=int, default=4001)
    parser.add_argument("--gram-n", type=int, default=400)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    run(args.time_points, args.freq_points, args.gram_n, args.repeats)


if __name__ == "__main__":
    main()
