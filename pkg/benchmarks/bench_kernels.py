"""Compare the numba and pure-numpy tridiagonal kernels.

Run:  python3 benchmarks/bench_kernels.py [--repeat 200] [--sizes 2 6 26 100]

Each kernel is compiled/warmed once, then timed on the same random
symmetric tridiagonal matrices for both backends. The table reports the
median time per call and the largest eigenvalue disagreement between the
backends (a sanity check that they solve the same problem).
"""

import argparse
import statistics
import time

import numpy as np

from photondress import kernels


def _time(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench(sizes, repeat, seed):
    rng = np.random.default_rng(seed)
    kernels.warmup()
    rows = []
    for n in sizes:
        diag = rng.normal(size=n)
        off = rng.normal(size=n - 1)
        cases = {
            "tridiag_eigh": lambda b: kernels.tridiag_eigh(diag, off, backend=b)[0],
            "bisect_eigvals": lambda b: kernels.bisect_eigvals(diag, off, backend=b),
            "ramp_track(64)": lambda b: kernels.ramp_track(diag, off, 64, backend=b)[0],
        }
        for name, call in cases.items():
            reps = repeat if name != "ramp_track(64)" else max(1, repeat // 10)
            t_numba = _time(lambda: call("numba"), reps)
            t_numpy = _time(lambda: call("numpy"), reps)
            a, b = call("numba"), call("numpy")
            agree = float(np.max(np.abs(np.asarray(a, float) - np.asarray(b, float))))
            rows.append((name, n, t_numba, t_numpy, agree))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 6, 26, 100])
    parser.add_argument("--repeat", type=int, default=200)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not kernels.USE_NUMBA:
        raise SystemExit("numba backend disabled (PHOTONDRESS_DISABLE_NUMBA set or numba missing)")
    print(f"{'kernel':<16}{'n':>5}{'numba [us]':>13}{'numpy [us]':>13}{'speedup':>9}{'max |diff|':>12}")
    for name, n, t_nb, t_np, agree in bench(args.sizes, args.repeat, args.seed):
        print(f"{name:<16}{n:>5}{t_nb * 1e6:>13.1f}{t_np * 1e6:>13.1f}{t_np / t_nb:>9.1f}{agree:>12.1e}")


if __name__ == "__main__":
    main()
