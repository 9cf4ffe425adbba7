"""Timing comparison of the extraction kernels.

Runs the same seeded hashes through the numba kernel, the pure-numpy
fallback, and the arbitrary-precision reference, printing median
per-call times. The numba column is skipped when numba is unavailable
or disabled via QLHL_PURE_NUMPY=1.

Usage: python3 benchmarks/bench_extract.py [--sizes 1024,4096,...]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from qlhl import BitString, ExtractorParams, SeededHash, extract, extract_fast
from qlhl import _kernels


def _time_call(fn, repeats: int) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench(sizes: list, repeats: int) -> None:
    rng = np.random.default_rng(1)
    print(f"{'n':>8} {'m':>8} {'numba':>12} {'numpy':>12} {'reference':>12}")
    for n in sizes:
        m = n // 2
        params = ExtractorParams.modified(n, m)
        seed = BitString.from_u8(
            rng.integers(0, 2, params.seed_len, dtype=np.uint8))
        x = BitString.from_u8(rng.integers(0, 2, n, dtype=np.uint8))
        h = SeededHash(params, seed)
        want = extract(h, x)

        columns = {}
        if _kernels.HAS_NUMBA:
            with _kernels.use_backend("numba"):
                extract_fast(h, x)  # warm the JIT outside the timing
                assert extract_fast(h, x) == want
                columns["numba"] = _time_call(lambda: extract_fast(h, x),
                                              repeats)
        with _kernels.use_backend("numpy"):
            assert extract_fast(h, x) == want
            columns["numpy"] = _time_call(lambda: extract_fast(h, x), repeats)
        columns["reference"] = _time_call(lambda: extract(h, x),
                                          max(3, repeats // 10))

        def cell(key: str) -> str:
            if key not in columns:
                return f"{'n/a':>12}"
            return f"{columns[key] * 1e6:>10.1f}us"

        print(f"{n:>8} {m:>8} {cell('numba')} {cell('numpy')} "
              f"{cell('reference')}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="256,1024,4096,16384,65536",
                        help="comma-separated input lengths in bits")
    parser.add_argument("--repeats", type=int, default=25)
    args = parser.parse_args()
    sizes = [int(v) for v in args.sizes.split(",")]
    print(f"active backend: {_kernels.backend()}")
    bench(sizes, args.repeats)


if __name__ == "__main__":
    main()
