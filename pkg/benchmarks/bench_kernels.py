"""Timing comparison of the compiled and numpy kernel backends.

Runs the four hot kernels (pair-sum histogram, pair-difference histogram,
cyclic autocorrelation, modular fold) on a few representative sizes and
reports best-of-N wall times for each backend plus the speedup.  Results
are checked for exact equality before timing; a mismatch aborts the run.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 2000,8000 --repeats 5
"""

import argparse
import time

import numpy as np

import sievelab._kernels_py as py_impl

try:
    import sievelab._kernels as cy_impl
except ImportError:
    cy_impl = None


def best_of(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def make_cases(n, rng):
    x = 40 * n
    elements = np.sort(rng.choice(x, size=n, replace=False)).astype(np.int64)
    p = 4099
    counts = np.bincount(elements % p, minlength=p).astype(np.int64)
    values = rng.integers(0, 50, size=16 * n).astype(np.int64)
    return [
        ("sum_histogram", (elements, 2 * x + 1)),
        ("difference_histogram", (elements, x)),
        ("cyclic_autocorrelation", (counts,)),
        ("fold_mod", (values, p)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,4000,16000",
                    help="comma-separated set sizes (default 1000,4000,16000)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=11)
    args = ap.parse_args()

    if cy_impl is None:
        print("compiled backend not importable; timing numpy fallback only")
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)

    header = f"{'kernel':<24}{'n':>8}{'numpy':>12}{'cython':>12}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        for name, fn_args in make_cases(n, rng):
            t_py = best_of(getattr(py_impl, name), fn_args, args.repeats)
            if cy_impl is None:
                print(f"{name:<24}{n:>8}{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>9}")
                continue
            got_py = getattr(py_impl, name)(*fn_args)
            got_cy = getattr(cy_impl, name)(*fn_args)
            if not np.array_equal(got_py, got_cy):
                raise SystemExit(f"backend mismatch in {name} at n={n}")
            t_cy = best_of(getattr(cy_impl, name), fn_args, args.repeats)
            print(f"{name:<24}{n:>8}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
                  f"{t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
