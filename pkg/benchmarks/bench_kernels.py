"""Compare the numba and numpy backends of the two hot kernels.

    python benchmarks/bench_kernels.py [--edges 1000000] [--pairs 1000] [--repeat 3]

Both backends run on identical inputs; outputs are checked for equality
before any timing is reported.
"""

import argparse
import time

import numpy as np

from bipinv import kernels
from bipinv.generators import random_unique_pm_graph
from bipinv.linalg import triangularize
from bipinv.matching import unique_perfect_matching


def signed_graph(n_edges, seed):
    rng = np.random.default_rng(seed)
    n = max(2, n_edges // 5)
    u = rng.integers(0, n, n_edges + n_edges // 5)
    v = rng.integers(0, n, n_edges + n_edges // 5)
    keep = u != v
    keys = np.unique(np.minimum(u, v)[keep] * n + np.maximum(u, v)[keep])[:n_edges]
    s = rng.choice(np.array([-1, 1], dtype=np.int8), len(keys))
    return (n, *kernels.symmetric_csr(n, keys // n, keys % n, s))


def lower_csr(pairs, seed):
    G = random_unique_pm_graph(pairs, 4 / pairs, seed)
    L = np.asarray(triangularize(G, unique_perfect_matching(G)).L, dtype=np.int64)
    low = np.tril(L, -1)
    indptr = np.concatenate([[0], np.cumsum(low.sum(axis=1))]).astype(np.int64)
    return pairs, indptr, np.nonzero(low)[1].astype(np.int64)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--edges", type=int, default=1_000_000)
    ap.add_argument("--pairs", type=int, default=1000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    forest_in = signed_graph(args.edges, args.seed)
    inverse_in = lower_csr(args.pairs, args.seed)
    cases = [
        (f"signed_forest ({args.edges} edges)", kernels.signed_forest, forest_in),
        (f"unit_lower_inverse_int64 ({args.pairs} pairs)", kernels.unit_lower_inverse_int64, inverse_in),
    ]
    print(f"{'kernel':<42}{'numba s':>10}{'numpy s':>10}{'speedup':>10}")
    for name, fn, inputs in cases:
        fn(*inputs, use_numba=True)  # compile
        t_nb, out_nb = best_of(lambda: fn(*inputs, use_numba=True), args.repeat)
        t_np, out_np = best_of(lambda: fn(*inputs, use_numba=False), args.repeat)
        for a, b in zip(out_nb, out_np):
            if not np.array_equal(a, b):
                raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<42}{t_nb:>10.4f}{t_np:>10.4f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
