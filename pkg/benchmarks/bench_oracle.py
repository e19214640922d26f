"""Time the oracle kernels under the numba and numpy backends.

    python3 benchmarks/bench_oracle.py --p 5 --k 2 --repeat 3

The first numba call of each kernel includes JIT compilation; it is reported
separately as ``compile+run`` and excluded from the steady-state figures.
"""
from __future__ import annotations

import argparse
import statistics
import time

from padic_sl2.oracle import HAVE_NUMBA, _kernels, closure_check, enumerate_sl2
from padic_sl2.subgroups import SubgroupDescriptor


def timed(fn, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def workloads(p, k):
    table = enumerate_sl2(p, k, backend="numpy")
    m = p**k
    full = SubgroupDescriptor.SL2O(p)
    small = enumerate_sl2(p, 1, backend="numpy")
    return {
        "enumerate": lambda b: _kernels.enumerate_sl2_array(p, k, b),
        "closure SL2(O)": lambda b: closure_check(table, full, b),
        "norm-one count": lambda b: _kernels.norm_one_count_raw(m, p, 1, 1, b),
        "residue buckets": lambda b: _kernels.residue_buckets(small.elements, p, b),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    print(f"SL2(Z/{args.p}^{args.k}), order {_kernels.group_order(args.p, args.k)}, median of {args.repeat}")
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + ("   speedup   compile+run" if HAVE_NUMBA else ""))
    for name, fn in workloads(args.p, args.k).items():
        first = None
        if HAVE_NUMBA:
            t0 = time.perf_counter()
            fn("numba")
            first = time.perf_counter() - t0
        times = {b: timed(lambda: fn(b), args.repeat) for b in backends}
        row = f"{name:<20}" + "".join(f"{times[b]:>11.3f}s" for b in backends)
        if HAVE_NUMBA:
            row += f"{times['numpy'] / times['numba']:>9.1f}x{first:>13.3f}s"
        print(row)


if __name__ == "__main__":
    main()
