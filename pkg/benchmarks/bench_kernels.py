"""Compare the compiled and pure-Python kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints the best-of-N wall time per kernel and backend, the speed-up, and
the largest absolute difference between the two outputs.
"""

import argparse
import timeit

import numpy as np

from oodir import _pykernels, kernels


def cases(rng):
    az = rng.uniform(0, 2 * np.pi, 2000)
    colat = rng.uniform(0, np.pi, 2000)
    psi = np.linspace(0, np.pi, 2000)
    x = np.linspace(-1, 1, 20000)
    return [
        ("real_sh_matrix lmax=8, 2000 dirs", "real_sh_matrix", (az, colat, 8, 8)),
        ("real_sh_matrix lmax=30, 2000 dirs", "real_sh_matrix", (az, colat, 30, 30)),
        ("hsh_radial_table nmax=10, 2000 psi", "hsh_radial_table", (psi, 10)),
        ("gegenbauer nu=12, 20000 x", "gegenbauer", (12, 2.5, x)),
    ]


def best_time(fn, args, repeat):
    n = 1
    while timeit.timeit(lambda: fn(*args), number=n) < 0.05:
        n *= 2
    return min(timeit.repeat(lambda: fn(*args), number=n, repeat=repeat)) / n


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not kernels.compiled_available():
        raise SystemExit("compiled kernels not built; run: pip install --no-build-isolation -e .")
    from oodir import _ckernels

    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'cython ms':>10s} {'python ms':>10s} {'speed-up':>9s} {'max diff':>9s}")
    for label, name, fargs in cases(rng):
        c_fn, p_fn = getattr(_ckernels, name), getattr(_pykernels, name)
        diff = float(np.max(np.abs(np.asarray(c_fn(*fargs)) - np.asarray(p_fn(*fargs)))))
        tc = best_time(c_fn, fargs, args.repeat)
        tp = best_time(p_fn, fargs, args.repeat)
        print(f"{label:38s} {tc * 1e3:10.3f} {tp * 1e3:10.3f} {tp / tc:8.1f}x {diff:9.1e}")


if __name__ == "__main__":
    main()
