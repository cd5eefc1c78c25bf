#!/usr/bin/env python3
"""Benchmark the GF(2^8) block kernels: numba @njit vs pure numpy.

The same comparison drives the env switch: NPC_NO_NUMBA=1 makes the
package use the numpy path that is timed here.

Usage:
    python benchmarks/bench_gf_kernels.py [--blocks N] [--k K] [--t T] [--repeat R]
"""

import argparse
import time

import numpy as np

from npcode import kernels
from npcode.codec import build_code
from npcode.galois import FieldContext


def time_fn(fn, args, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--blocks", type=int, default=200_000)
    parser.add_argument("--k", type=int, default=12)
    parser.add_argument("--t", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    field = FieldContext(8)
    code = build_code(args.k, args.t, field)
    rng = np.random.default_rng(0)
    data = rng.integers(0, 256, size=(args.blocks, code.data_len), dtype=np.uint8)
    parity = code.parity_int_matrix()
    log, exp = field.log_table, field.exp_table

    ref = kernels.gf_matmul_numpy(data, parity, log, exp)
    rows = [("numpy", kernels.gf_matmul_numpy)]
    if kernels.gf_matmul_numba is not None:
        # first call pays JIT compilation; warm up before timing
        got = kernels.gf_matmul_numba(data, parity, log, exp)
        assert np.array_equal(got, ref), "kernel paths disagree"
        rows.append(("numba", kernels.gf_matmul_numba))
    else:
        print("numba not importable; timing numpy only")

    mb = data.nbytes / 1e6
    print(f"encode parity for {args.blocks} blocks, k={args.k} t={args.t} "
          f"({mb:.1f} MB of data symbols), best of {args.repeat}")
    timings = {}
    for name, fn in rows:
        best = time_fn(fn, (data, parity, log, exp), args.repeat)
        timings[name] = best
        print(f"  {name:>6}: {best * 1e3:8.2f} ms   {mb / best:8.1f} MB/s")
    if len(timings) == 2:
        print(f"  speedup: {timings['numpy'] / timings['numba']:.1f}x "
              f"(numba over numpy)")


if __name__ == "__main__":
    main()
