"""Time the robustness kernel: numba vs the numpy fallback.

    python3 benchmarks/bench_kernels.py --sizes 50,100,300 --subsets 500

Each row evaluates the same random closed subsets with both backends,
checks the values agree, and reports microseconds per evaluation.
"""
import argparse
import time

import numpy as np

from supermatch._kernels import HAVE_NUMBA, mask_to_array, robustness_b, robustness_b_many
from supermatch.instance import generate_instance
from supermatch.rotations import rotation_poset
from supermatch.solvers import random_closed_subset


def per_call_us(fn, rows, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for row in rows:
            fn(row)
        best = min(best, time.perf_counter() - t0)
    return best / len(rows) * 1e6


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="50,100,300")
    ap.add_argument("--subsets", type=int, default=500)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; only the numpy backend will run")

    print(f"{'n':>5} {'|V|':>5} {'numpy us':>9} {'numba us':>9} {'batch us':>9} {'speedup':>8}")
    rng = np.random.default_rng(args.seed)
    for n in (int(x) for x in args.sizes.split(",")):
        poset = rotation_poset(generate_instance(n, args.seed))
        t = poset.kernel_tables
        rows = np.array([mask_to_array(random_closed_subset(poset, rng).mask, poset.size) for _ in range(args.subsets)])
        rows = rows.reshape(args.subsets, poset.size)
        ref = [robustness_b(t, r, "numpy") for r in rows]
        np_us = per_call_us(lambda r: robustness_b(t, r, "numpy"), rows, args.repeat)
        if HAVE_NUMBA:
            assert [robustness_b(t, r, "numba") for r in rows] == ref
            assert robustness_b_many(t, rows, "numba").tolist() == ref
            nb_us = per_call_us(lambda r: robustness_b(t, r, "numba"), rows, args.repeat)
            t0 = time.perf_counter()
            robustness_b_many(t, rows, "numba")
            batch_us = (time.perf_counter() - t0) / len(rows) * 1e6
            print(f"{n:>5} {poset.size:>5} {np_us:>9.1f} {nb_us:>9.1f} {batch_us:>9.1f} {np_us / nb_us:>7.1f}x")
        else:
            print(f"{n:>5} {poset.size:>5} {np_us:>9.1f} {'-':>9} {'-':>9} {'-':>8}")


if __name__ == "__main__":
    main()
