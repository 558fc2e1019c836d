#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

The backend is chosen at import time from FUPLAB_BACKEND, so this script
re-executes itself once per backend and compares wall times and outputs.

    python benchmarks/bench_kernels.py            # run both backends
    FUPLAB_BACKEND=numpy python benchmarks/bench_kernels.py --single
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def bench_measure_ft(reps=3):
    from fuplab import kernels

    rng = np.random.default_rng(42)
    xs = rng.uniform(0.0, 1.0, 50_000)
    ws = rng.uniform(0.0, 1.0, 50_000)
    ws /= ws.sum()
    xi = np.linspace(0.0, 1e4, 8192)
    kernels.measure_ft(xs[:16], ws[:16], xi[:16])  # warm the jit
    best = np.inf
    out = None
    for _ in range(reps):
        t0 = time.perf_counter()
        out = kernels.measure_ft(xs, ws, xi)
        best = min(best, time.perf_counter() - t0)
    return best, complex(out[-1])


def bench_refine_expand(depth=12):
    from fuplab import fig_sch1, kernels
    from fuplab.schottky import _allowed_table

    data = fig_sch1()
    gens = data.generators
    base = data.intervals
    allowed = _allowed_table(data)
    letters = np.arange(4, dtype=np.int64)
    pref = np.broadcast_to(np.eye(2), (4, 2, 2)).copy()
    kernels.refine_expand(pref, letters, gens, base, allowed)  # warm
    t0 = time.perf_counter()
    lo = hi = lengths = None
    for _ in range(2, depth + 1):
        pref, letters, lo, hi, lengths = kernels.refine_expand(
            pref, letters, gens, base, allowed
        )
    dt = time.perf_counter() - t0
    return dt, float(lengths.sum())


def run_single():
    from fuplab import kernels

    t_ft, check_ft = bench_measure_ft()
    t_re, check_re = bench_refine_expand()
    print(
        json.dumps(
            {
                "backend": kernels.active_backend(),
                "measure_ft_seconds": t_ft,
                "measure_ft_check": [check_ft.real, check_ft.imag],
                "refine_expand_seconds": t_re,
                "refine_expand_check": check_re,
            }
        )
    )


def run_both():
    results = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, FUPLAB_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--single"],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        results[backend] = json.loads(proc.stdout.strip().splitlines()[-1])
    print(f"{'kernel':<16} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    for key, label in [
        ("measure_ft_seconds", "measure_ft"),
        ("refine_expand_seconds", "refine_expand"),
    ]:
        tn = results["numba"][key]
        tp = results["numpy"][key]
        print(f"{label:<16} {tn:>9.3f}s {tp:>9.3f}s {tp / tn:>8.2f}x")
    ft_n = results["numba"]["measure_ft_check"]
    ft_p = results["numpy"]["measure_ft_check"]
    dev = abs(complex(*ft_n) - complex(*ft_p))
    re_dev = abs(results["numba"]["refine_expand_check"] - results["numpy"]["refine_expand_check"])
    print(f"cross-backend agreement: measure_ft {dev:.2e}, refine_expand {re_dev:.2e}")
    assert dev < 1e-10 and re_dev < 1e-10, "backends disagree"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--single", action="store_true",
                    help="benchmark only the active backend, print JSON")
    args = ap.parse_args()
    if args.single:
        run_single()
    else:
        run_both()


if __name__ == "__main__":
    main()
