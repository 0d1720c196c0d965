"""Oracle scan throughput: numba kernel vs the pure-numpy fallback.

    python3 benchmarks/bench_oracle.py [--repeat 3] [--max-side 5]

Both backends must return the same optimum; the script exits non-zero if
they ever disagree.  The numba column excludes compilation (one warm-up call).
"""

from __future__ import annotations

import argparse
import sys
import time

from bicluster_editing._accel import HAVE_NUMBA
from bicluster_editing.generators import random_graph
from bicluster_editing.oracle import oracle_opt, state_bound


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-side", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can run", file=sys.stderr)
        return 1
    oracle_opt(random_graph(2, 2, 0.5, 0), use_numba=True)  # compile
    print(f"{'size':>6} {'states':>10} {'numpy s':>9} {'numba s':>9} {'speedup':>8}")
    for n in range(2, args.max_side + 1):
        g = random_graph(n, n, 0.5, args.seed + n)
        c_np = oracle_opt(g, use_numba=False)[0]
        c_nb = oracle_opt(g, use_numba=True)[0]
        if c_np != c_nb:
            print(f"backends disagree on {n}x{n}: {c_np} vs {c_nb}", file=sys.stderr)
            return 2
        t_np = best_time(lambda: oracle_opt(g, use_numba=False), args.repeat)
        t_nb = best_time(lambda: oracle_opt(g, use_numba=True), args.repeat)
        print(f"{n}x{n:<4} {state_bound(n, n):>10} {t_np:>9.4f} {t_nb:>9.4f} {t_np / max(t_nb, 1e-9):>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
