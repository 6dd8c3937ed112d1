"""Time the jitted and numpy kernels side by side.

Usage::

    python benchmarks/bench_kernels.py [--repeat N] [--end-to-end]

``--end-to-end`` also times ``q_total`` on the degenerate a = 1/2 family
member in two fresh interpreters, with and without ``QCORR_DISABLE_NUMBA=1``.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from qcorr import _accel
from qcorr.discord import conditional_entropy_grid
from qcorr.linalg import MAX_SWEEPS, OFF_TOL, jacobi_kernel
from qcorr.random_states import random_density

END_TO_END = """
import time
from qcorr import _accel
from qcorr.measures import q_total
from qcorr.states import make_paper_family
rho = make_paper_family(0.5)
t0 = time.perf_counter(); q_total(rho); cold = time.perf_counter() - t0
t0 = time.perf_counter(); q_total(rho); warm = time.perf_counter() - t0
print(_accel.backend(), cold, warm)
"""


def best_of(stmt, repeat, number):
    return min(timeit.repeat(stmt, repeat=repeat, number=number)) / number


def bench_jacobi(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in (2, 4, 8, 16):
        g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = g + g.conj().T
        times = {}
        for name in ("numba", "numpy"):
            k = jacobi_kernel(name)
            k(h, MAX_SWEEPS, OFF_TOL)
            times[name] = best_of(lambda: k(h, MAX_SWEEPS, OFF_TOL), repeat, 50)
        rows.append((f"jacobi n={n}", times))
    return rows


def bench_grid(repeat):
    m = random_density((2, 2), np.random.default_rng(1)).matrix
    thetas = np.linspace(0, np.pi, 64)
    phis = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    times = {}
    for name in ("numba", "numpy"):
        conditional_entropy_grid(m, thetas, phis, name)
        times[name] = best_of(lambda: conditional_entropy_grid(m, thetas, phis, name), repeat, 5)
    return [("discord grid 64x128", times)]


def end_to_end():
    rows = []
    for flag in ("0", "1"):
        env = dict(os.environ, QCORR_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, check=True,
                             capture_output=True, text=True).stdout.split()
        rows.append((out[0], float(out[1]), float(out[2])))
    return rows


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; both columns time the numpy code paths")
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speed-up':>10}")
    for label, t in bench_jacobi(args.repeat) + bench_grid(args.repeat):
        print(f"{label:<22}{t['numba'] * 1e3:>12.4f}{t['numpy'] * 1e3:>12.4f}"
              f"{t['numpy'] / t['numba']:>9.1f}x")
    if args.end_to_end:
        print()
        print(f"{'q_total(a=1/2)':<22}{'cold [s]':>12}{'warm [s]':>12}")
        for backend, cold, warm in end_to_end():
            print(f"{backend:<22}{cold:>12.3f}{warm:>12.3f}")


if __name__ == "__main__":
    main()
