"""Timing comparison of the compiled and pure-numpy direct-sum kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
Prints per-case wall times and the speedup ratio; exits nonzero if the
two kernels disagree beyond rounding.
"""
import argparse
import time

import numpy as np

from qelattice import kernels
from qelattice.kernels import _fallback

CASES = [
    # (label, period, kx, ky, r_max)
    ("l=0.5 Gamma", 0.5, 0.0, 0.0, 40.0),
    ("l=0.8 generic", 0.8, 1.4, 0.8, 60.0),
    ("l=0.9999 near-resonant", 0.9999, 0.3, 0.2, 120.0),
]


def run(fn, l, kx, ky, r_max, repeats):
    etas = 0.01 / 2.0 ** np.arange(4)
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(l, kx, ky, 2.0 * np.pi, etas, 1.0, 0.0, r_max,
                 0.7 * r_max, r_max / 12.0)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()
    if not kernels.HAVE_COMPILED:
        print("compiled extension not available; benchmarking fallback only")
    print(f"{'case':28s} {'compiled':>10s} {'numpy':>10s} {'speedup':>8s}")
    bad = False
    for label, l, kx, ky, r_max in CASES:
        t_py, out_py = run(_fallback.direct_gbar_sums, l, kx, ky, r_max,
                           args.repeats)
        if kernels.HAVE_COMPILED:
            t_c, out_c = run(kernels.direct_gbar_sums, l, kx, ky, r_max,
                             args.repeats)
            diff = np.abs(out_c - out_py).max()
            if diff > 1e-9 * max(1.0, np.abs(out_py).max()):
                print(f"MISMATCH {label}: {diff:.2e}")
                bad = True
            print(f"{label:28s} {t_c * 1e3:9.2f}ms {t_py * 1e3:9.2f}ms "
                  f"{t_py / t_c:7.2f}x")
        else:
            print(f"{label:28s} {'-':>10s} {t_py * 1e3:9.2f}ms {'-':>8s}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
