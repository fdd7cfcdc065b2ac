#!/usr/bin/env python3
"""Benchmark the compiled stepping kernel against its pure-Python twin.

Runs the workloads the kernel actually serves: steady-state relaxation runs
at oracle tolerance and long conservation runs at tight tolerance.  Usage:

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from crosskerr.constants import TWO_PI
from crosskerr.kernels import available_backends

CASES = [
    # (label, delta_r/2pi MHz, delta_a/2pi MHz, p photons/s, t_end_kappa, rtol)
    ("oracle point, rtol 1e-8", -41.5, -41.5, 1.5e7, 50, 1e-8),
    ("detuned grid edge, rtol 1e-8", 400.0, 400.0, 1.3e7, 50, 1e-8),
    ("conservation run, rtol 1e-10", -150.0, -150.0, 1.3e6, 100, 1e-10),
]


def run(fn, d_r, d_a, p, t_end_kappa, rtol):
    kappa = TWO_PI * 40e6
    times, y, status = fn(
        delta_r=TWO_PI * d_r * 1e6,
        delta_a=TWO_PI * d_a * 1e6,
        g_a=TWO_PI * 150e6,
        g_zz=TWO_PI * 250e6,
        kappa=kappa,
        drive=np.sqrt(kappa * p),
        t_end=t_end_kappa / kappa,
        rtol=rtol,
        atol=1e-12,
        max_steps=50_000_000,
    )
    assert status == 0
    return len(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':34s} {'steps':>8s} " + " ".join(f"{n:>12s}" for n in backends))
    speed = {}
    for label, d_r, d_a, p, t_end_kappa, rtol in CASES:
        per = {}
        steps = None
        for name, fn in backends.items():
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                steps = run(fn, d_r, d_a, p, t_end_kappa, rtol)
                best = min(best, time.perf_counter() - t0)
            per[name] = best
        speed[label] = per
        cells = " ".join(f"{per[n] * 1e3:9.2f} ms" for n in backends)
        print(f"{label:34s} {steps:8d} {cells}")
    if "cython" in backends:
        ratios = [
            speed[label]["python"] / speed[label]["cython"] for label in speed
        ]
        print(f"compiled speedup: {min(ratios):.0f}x to {max(ratios):.0f}x")


if __name__ == "__main__":
    main()
