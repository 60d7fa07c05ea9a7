"""Compare the GF(p) Gray-code backends: numba, numpy, and the exact Mod engine.

    python benchmarks/bench_kernels.py --n 8-16 --d 4 --p 1000003

Every backend must return the same residue; the script exits 1 otherwise.
"""
import argparse
import sys
import time

import numpy as np

from polarization._kernels import HAS_NUMBA, gray_polarize
from polarization.fast import tensor_arrays
from polarization.polarize import polarize_subset_sum_gray
from polarization.rng import SplitMix64
from polarization.scalar import GF
from polarization.symtensor import diagonal, random_symmetric
from polarization.vector import random_vector


def timed(fn, repetitions):
    best, value = float("inf"), None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return value, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="8-14", help="order or range lo-hi")
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--p", type=int, default=1_000_003)
    ap.add_argument("--repetitions", type=int, default=3)
    ap.add_argument("--exact-max-n", type=int, default=12,
                    help="skip the pure-Python Mod engine above this order")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    lo, _, hi = args.n.partition("-")
    orders = range(int(lo), int(hi or lo) + 1)
    F = GF(args.p)
    backends = (["numba"] if HAS_NUMBA else []) + ["numpy"]
    if HAS_NUMBA:  # compile outside the timed region
        gray_polarize(np.ones(1, np.int64), np.ones((1, 1), np.int64), np.ones((1, 1), np.int64), 7, "numba")

    print(f"{'n':>3} {'terms':>6} " + " ".join(f"{b + ' s':>10}" for b in backends) + f" {'exact s':>10}  residue")
    ok = True
    for n in orders:
        rng = SplitMix64(args.seed + n)
        u = random_symmetric(n, args.d, F, seed=rng.next_u64())
        xs = [random_vector(rng, args.d, F) for _ in range(n)]
        coef, exps = tensor_arrays(u)
        arr = np.array([[c.value for c in x.coords] for x in xs], dtype=np.int64)
        row, values = [], set()
        for b in backends:
            v, t = timed(lambda: gray_polarize(coef, exps, arr, args.p, b), args.repetitions)
            row.append(f"{t:10.4f}")
            values.add(v)
        if n <= args.exact_max_n:
            v, t = timed(lambda: polarize_subset_sum_gray(diagonal(u), xs), 1)
            row.append(f"{t:10.4f}")
            values.add(v.value)
        else:
            row.append(f"{'-':>10}")
        ok &= len(values) == 1
        print(f"{n:3d} {len(coef):6d} " + " ".join(row) + f"  {sorted(values)}")
    if not ok:
        print("backends disagree", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
