"""Benchmark the compiled kernels against the pure-Python fallback.

Kernel microbenchmarks run both implementations in-process; end-to-end
workloads (bounds rows, feasibility solves) re-run this script in a
subprocess with STEERKIT_BACKEND forced, since the backend is chosen at
import time.

Usage: python benchmarks/bench_backends.py
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def _time(fn, args_list, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for a in args_list:
            fn(a)
        best = min(best, time.perf_counter() - t0)
    return best / len(args_list)


def bench_kernels():
    from steerkit.backend import available_backends, get_impl

    rng = np.random.default_rng(0)
    h2s = []
    h4s = []
    t3s = []
    for _ in range(1500):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        h2s.append(g + g.conj().T)
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h4s.append(g + g.conj().T)
        t3s.append(rng.normal(size=(3, 3)))
    rows = []
    for name in available_backends():
        impl = get_impl(name)
        rows.append(
            (
                name,
                1e6 * _time(impl.eigh2, h2s),
                1e6 * _time(impl.eigh4, h4s),
                1e6 * _time(impl.eigh3s, t3s),
                1e6 * _time(impl.svd3, t3s),
            )
        )
    print("\nkernel microbenchmarks (us/call)")
    print(f"{'backend':>10} {'eigh2':>9} {'eigh4':>9} {'eigh3s':>9} {'svd3':>9}")
    for name, *cols in rows:
        print(f"{name:>10} " + " ".join(f"{c:9.2f}" for c in cols))
    if len(rows) == 2:
        speed = [rows[1][i + 1] / rows[0][i + 1] for i in range(4)]
        print(f"{'speedup':>10} " + " ".join(f"{s:8.1f}x" for s in speed))


def bench_end_to_end():
    from steerkit import criteria, states
    from steerkit.backend import BACKEND
    from steerkit.cli import run_crosscheck

    n_states = 3000
    t0 = time.perf_counter()
    for seed in range(n_states):
        st = states.random_state(seed, "mixed" if seed % 2 else "pure")
        c = states.concurrence(st)
        criteria.chsh_max(st.T)
        criteria.chsh_max_mub(st.T)
    bounds_dt = time.perf_counter() - t0

    t0 = time.perf_counter()
    run_crosscheck(60, seed=1)
    cc_dt = time.perf_counter() - t0
    print(
        f"{BACKEND:>10} {1e3 * bounds_dt / n_states:16.3f} {1e3 * cc_dt / 60:22.3f}"
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--end-to-end", choices=("pure", "compiled"))
    args = parser.parse_args()
    if args.end_to_end:
        bench_end_to_end()
        return
    bench_kernels()
    from steerkit.backend import available_backends

    print("\nend-to-end workloads (ms/item)", flush=True)
    print(
        f"{'backend':>10} {'bounds row':>16} {'crosscheck instance':>22}",
        flush=True,
    )
    for name in available_backends():
        env = dict(os.environ, STEERKIT_BACKEND=name)
        subprocess.run(
            [sys.executable, __file__, "--end-to-end", name],
            env=env,
            check=True,
        )


if __name__ == "__main__":
    main()
