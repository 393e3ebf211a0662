"""Benchmark the compiled kernels against the pure-Python fallbacks.

Run: python benchmarks/bench_kernels.py [--nodes 120] [--pairs 20]
The same comparison can be driven end-to-end by setting RRS_DISABLE_NUMBA=1
before importing rrs, which routes every metric through the fallback path.
"""

import argparse
import random
import time

import numpy as np

from rrs.kernels import NUMBA_ENABLED, lcs_dp, lcs_dp_python, ted_dp, ted_dp_python
from rrs.treediff import _Interner, _tree_arrays
from rrs.astkit.tree import build_tree

KINDS = ("blk", "seq", "call", "bin", "loop", "cond", "asgn", "ret")
LEAVES = ("a", "b", "c", "d", "e", "f")


def random_tree(rng, n_nodes):
    parents = [-1] + [rng.randrange(i) for i in range(1, n_nodes)]
    children = [[] for _ in range(n_nodes)]
    for i in range(1, n_nodes):
        children[parents[i]].append(i)

    def nested(i):
        if children[i]:
            return (rng.choice(KINDS), [nested(c) for c in children[i]])
        return ("leaf", rng.choice(LEAVES))

    return build_tree(nested(0))


def bench(fn, workloads, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for args in workloads:
            fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--nodes", type=int, default=120)
    parser.add_argument("--pairs", type=int, default=20)
    args = parser.parse_args()

    rng = random.Random(0)
    ted_work = []
    for _ in range(args.pairs):
        interner = _Interner()
        t1 = random_tree(rng, args.nodes)
        t2 = random_tree(rng, args.nodes)
        a1 = _tree_arrays(t1, interner)
        a2 = _tree_arrays(t2, interner)
        ted_work.append((*a1, *a2, 1, 1, 1))
    lcs_work = []
    for _ in range(args.pairs * 5):
        a = np.array([rng.randrange(12) for _ in range(args.nodes)], dtype=np.int64)
        b = np.array([rng.randrange(12) for _ in range(args.nodes)], dtype=np.int64)
        lcs_work.append((a, b))

    if not NUMBA_ENABLED:
        print("numba disabled (RRS_DISABLE_NUMBA set or not installed); "
              "benchmarking fallback against itself is meaningless")
        return

    # trigger JIT compilation outside the timed region
    ted_dp(*ted_work[0])
    lcs_dp(*lcs_work[0])

    t_py = bench(ted_dp_python, ted_work)
    t_nb = bench(ted_dp, ted_work)
    print(f"ted  ({args.pairs} pairs of {args.nodes}-node trees): "
          f"python {t_py * 1000:8.1f} ms | numba {t_nb * 1000:8.1f} ms | "
          f"speedup {t_py / max(t_nb, 1e-12):6.1f}x")

    l_py = bench(lcs_dp_python, lcs_work)
    l_nb = bench(lcs_dp, lcs_work)
    print(f"lcs  ({len(lcs_work)} pairs of length {args.nodes}):      "
          f"python {l_py * 1000:8.1f} ms | numba {l_nb * 1000:8.1f} ms | "
          f"speedup {l_py / max(l_nb, 1e-12):6.1f}x")


if __name__ == "__main__":
    main()
