"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5] [--steps 20000] [--grid 200]
"""

import argparse
import math
import timeit

import numpy as np

from isoweingarten.kernels import backends
from isoweingarten.lw import EPS_SING, profile_case_i
from isoweingarten.rotational import make_rotational
from isoweingarten.surface import sample_grid


def rk4_job(mod, steps):
    m0, C = 1.0, 1.0
    u0 = 0.5
    gp0 = m0 * u0 + math.sqrt(C + m0 * m0 * u0 * u0)
    h = 2.0 / steps
    return lambda: mod.rk4_lw(m0, 0.0, u0, 0.0, gp0, h, steps, EPS_SING)


def fd_job(mod, n):
    s = make_rotational(profile_case_i(1.0, 1.0, u_range=(0.5, 2.5))).surface
    h_u, h_v = 2.0 / (n - 1), 2.0 * math.pi / n
    P = sample_grid(s, 0.5, 0.0, n, n, h_u, h_v)
    return lambda: mod.fd_forms_grid(P, h_u, h_v)


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--steps", type=int, default=20000, help="RK4 steps")
    ap.add_argument("--grid", type=int, default=200, help="FD grid side")
    args = ap.parse_args(argv)

    mods = backends()
    jobs = {
        f"rk4_lw ({args.steps} steps)": lambda m: rk4_job(m, args.steps),
        f"fd_forms_grid ({args.grid}x{args.grid})": lambda m: fd_job(m, args.grid),
    }
    print(f"{'kernel':32s} " + " ".join(f"{name:>12s}" for name in mods) + "   speedup")
    for label, make in jobs.items():
        times = {name: best_of(make(mod), args.repeat) for name, mod in mods.items()}
        row = " ".join(f"{t * 1e3:10.3f}ms" for t in times.values())
        speedup = (f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else "     n/a")
        print(f"{label:32s} {row} {speedup}")

    # both backends must agree on the work they time
    if "cython" in mods:
        a = rk4_job(mods["python"], 1000)()
        b = rk4_job(mods["cython"], 1000)()
        dev = float(np.max(np.abs(np.asarray(a[1]) - np.asarray(b[1]))))
        print(f"rk4_lw backend agreement: max |dg| {dev:.1e}")


if __name__ == "__main__":
    main()
