#!/usr/bin/env python3
"""Time the numba and pure-numpy flavours of each hot kernel.

Both flavours are called on identical inputs, their outputs are compared,
and the best of several repeats is reported. Run from the repository root::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import time

import numpy as np

from nanoradar import _kernels
from nanoradar._accel import NUMBA_AVAILABLE
from nanoradar.rgd import LATTICE_SUBDIV


def _best(fn, args, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _max_rel(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    worst = 0.0
    for x, y in zip(a, b):
        scale = max(np.max(np.abs(y)), 1e-300)
        worst = max(worst, float(np.max(np.abs(x - y)) / scale))
    return worst


def cases():
    rng = np.random.default_rng(7)
    z = (rng.uniform(0.1, 60.0, 400) + 1j * rng.uniform(0.0, 2.0, 400)).astype(np.complex128)
    yield "bessel_j_table", (120, z)
    yield "bessel_y_table", (120, z.real.astype(np.complex128))
    mu = np.cos(np.linspace(0.0, math.pi, 2000))
    yield "pi_tau_table", (80, mu)
    pi, tau = _kernels.pi_tau_table_numpy(80, mu)
    a = rng.normal(size=80) + 1j * rng.normal(size=80)
    b = rng.normal(size=80) + 1j * rng.normal(size=80)
    yield "amplitude_sums", (a, b, pi, tau)
    n, radius = 64, 1.0
    h = 2.0 * radius / n
    axis = (np.arange(n + 2) - (n + 1) / 2.0) * h
    q = np.array([-2.0, 0.0, 1.0])
    offs = (np.arange(LATTICE_SUBDIV) + 0.5) / LATTICE_SUBDIV * h - 0.5 * h
    e = [np.exp(1j * qi * axis) for qi in q]
    s = [np.exp(1j * qi * offs) for qi in q]
    yield "lattice_phase_sums", (0, axis, axis, axis, *e, radius, h, *s)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if not NUMBA_AVAILABLE:
        print("numba is not installed; only the numpy flavour can be timed")
    print(f"{'kernel':<22}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, kargs in cases():
        numpy_fn = getattr(_kernels, f"{name}_numpy")
        t_np, out_np = _best(numpy_fn, kargs, args.repeat)
        if NUMBA_AVAILABLE:
            numba_fn = getattr(_kernels, f"{name}_numba")
            numba_fn(*kargs)  # compile outside the timed region
            t_nb, out_nb = _best(numba_fn, kargs, args.repeat)
            diff = _max_rel(out_nb, out_np)
            print(f"{name:<22}{t_np:>12.4g}{t_nb:>12.4g}{t_np / t_nb:>10.2f}{diff:>15.2e}")
        else:
            print(f"{name:<22}{t_np:>12.4g}{'-':>12}{'-':>10}{'-':>15}")


if __name__ == "__main__":
    main()
