"""Compare the numba and numpy compatible-pair kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Workloads are the block groups the oracle joins for a few q = 3 pairs, where
no early exit is possible and every candidate pair is scanned.
"""

from __future__ import annotations

import argparse
import os
import time

from qjoin import _kernels
from qjoin.oracle import _grouped_blocks, cross_check

WORKLOADS = [
    ((2, 2, 2, 1, 1, 1), (2, 1, 1, 1, 1, 1, 1, 1), 5),
    ((3, 3, 1, 1, 1), (1,) * 9, 5),
    ((2, 2, 1, 1, 1, 1, 1), (2, 1, 1, 1, 1, 1, 1, 1), 5),
    ((2, 1, 1, 1, 1, 1, 1, 1), (1,) * 9, 5),
]


def _groups(m, n, r):
    vg = _grouped_blocks(tuple(sorted(m, reverse=True)), r)
    wg = _grouped_blocks(tuple(sorted(n, reverse=True)), r)
    return [(vg[s], wg[s]) for s in set(vg) & set(wg)]


def _time(fn, groups, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for vm, wm in groups:
            fn(vm, wm)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    kernels = {"numpy": _kernels.first_compatible_numpy}
    if _kernels.HAVE_NUMBA:
        kernels["numba"] = _kernels.first_compatible_numba
        _kernels.first_compatible_numba(*_groups((1,), (1,), 3)[0])  # compile outside the timing
    else:
        print("numba not installed; timing numpy only")

    print(f"{'workload':<52} {'pairs':>12} " + " ".join(f"{k:>10}" for k in kernels))
    for m, n, r in WORKLOADS:
        groups = _groups(m, n, r)
        pairs = sum(len(v) * len(w) for v, w in groups)
        times = [_time(fn, groups, args.repeat) for fn in kernels.values()]
        label = f"{m} | {n} r={r}"
        print(f"{label:<52} {pairs:>12} " + " ".join(f"{t:>9.3f}s" for t in times))

    for name in kernels:
        os.environ["QJOIN_DISABLE_NUMBA"] = "1" if name == "numpy" else "0"
        _grouped_blocks.cache_clear()
        t0 = time.perf_counter()
        rep = cross_check(6)
        print(f"cross_check(6) with {name:<6}: {time.perf_counter() - t0:.2f}s, {len(rep.counterexamples)} disagreements")


if __name__ == "__main__":
    main()
