"""Benchmark the JIT-compiled ranking kernels against the pure-numpy fallback.

Run:

    python benchmarks/bench_kernels.py [--draws 200000] [--k 6] [--repeat 5]

The same functions back `lucekit simulate`; set LUCEKIT_DISABLE_NUMBA=1 to
force the numpy path at runtime. This script imports both implementations
directly so one process can time the two side by side.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from lucekit._kernels import (
    HAVE_NUMBA,
    rank_rows_np,
    top_counts_np,
)


def _time(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--draws", type=int, default=200_000, help="rows (sample size)")
    parser.add_argument("--k", type=int, default=6, help="columns (alternatives)")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    scores = np.ascontiguousarray(rng.standard_normal((args.draws, args.k)))
    ranks = rank_rows_np(scores)
    members = np.arange(max(2, args.k // 2), dtype=np.int64)

    rows = [
        ("rank_rows", rank_rows_np, (scores,)),
        ("top_counts", top_counts_np, (ranks, members)),
    ]
    print(f"shape = {args.draws} x {args.k}, choice set of {members.size}, best of {args.repeat}")
    for name, np_fn, np_args in rows:
        t_np = _time(np_fn, *np_args, repeat=args.repeat)
        line = f"{name:<12} numpy {t_np * 1e3:8.2f} ms"
        if HAVE_NUMBA:
            from lucekit._kernels import rank_rows_nb, top_counts_nb

            nb_fn = rank_rows_nb if name == "rank_rows" else top_counts_nb
            nb_fn(*np_args)  # compile outside the timed region
            t_nb = _time(nb_fn, *np_args, repeat=args.repeat)
            line += f"   numba {t_nb * 1e3:8.2f} ms   speedup {t_np / t_nb:5.2f}x"
            assert np.array_equal(nb_fn(*np_args), np_fn(*np_args)), f"{name}: backends disagree"
        else:
            line += "   (numba unavailable)"
        print(line)


if __name__ == "__main__":
    main()
