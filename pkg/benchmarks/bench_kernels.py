"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]

Both paths are called directly, so the BMZI_DISABLE_NUMBA flag does not
matter here. Compilation happens before timing.
"""
import argparse
import timeit

import numpy as np

from bmzi import kernels
from bmzi._accel import HAVE_NUMBA


def _cases(n, rng):
    th1, th2 = rng.uniform(0, np.pi / 2, (2, n))
    phi = rng.uniform(0, 2 * np.pi, n)
    a0 = np.ones(n, dtype=np.complex128)
    a1 = np.zeros(n, dtype=np.complex128)
    v = rng.normal(size=(3, n))
    v *= rng.uniform(size=n) ** (1 / 3) / np.linalg.norm(v, axis=0)
    u = rng.random((2, n))
    return {
        "born": ("_born", (th1, th2, phi, a0, a1)),
        "entropies": ("_entropies", (v[0], v[1], v[2])),
        "count": ("_count", (u[0], u[1], 0.37, 0.0406, 0.0406)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"n={args.n}  repeat={args.repeat}  (best time per call)")
    print(f"{'kernel':<10} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}")
    for name, (prefix, call_args) in _cases(args.n, rng).items():
        fn_np = getattr(kernels, prefix + "_numpy")
        t_np = min(timeit.repeat(lambda: fn_np(*call_args), number=1, repeat=args.repeat))
        if HAVE_NUMBA:
            fn_nb = getattr(kernels, prefix + "_numba")
            fn_nb(*call_args)
            t_nb = min(timeit.repeat(lambda: fn_nb(*call_args), number=1, repeat=args.repeat))
            print(f"{name:<10} {t_np * 1e3:11.2f} {t_nb * 1e3:11.2f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:<10} {t_np * 1e3:11.2f} {'n/a':>11} {'':>8}")


if __name__ == "__main__":
    main()
