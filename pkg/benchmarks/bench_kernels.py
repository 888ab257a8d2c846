"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--level 6] [--repeat 3]

Each kernel runs on the same inputs under both backends; outputs are
checked for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from hexacarpet import _kernels
from hexacarpet.graphs import build_word_graph


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(g, n_sources, walkers, steps):
    indptr, indices = g.indptr, g.indices
    rng = np.random.default_rng(0)
    sources = np.sort(rng.choice(g.vertex_count, size=n_sources, replace=False)).astype(np.int64)
    draws = rng.random((steps, walkers))
    yield "bfs_distances (1 source)", lambda m: m.bfs_distances(indptr, indices, 0)
    yield f"eccentricities ({n_sources} sources)", lambda m: m.eccentricities(indptr, indices, sources)
    yield (f"walk_returns ({walkers} walkers x {steps} steps)",
           lambda m: m.walk_returns(indptr, indices, np.zeros(walkers, dtype=np.int64), draws, 0))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--level", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sources", type=int, default=50)
    ap.add_argument("--walkers", type=int, default=65536)
    ap.add_argument("--steps", type=int, default=100)
    args = ap.parse_args()

    cc, py = _kernels.compiled_backend, _kernels.python_backend
    if cc is None:
        raise SystemExit("compiled core not available; reinstall with `pip install -e . --no-build-isolation`")
    g = build_word_graph(args.level)
    print(f"G_{args.level}: {g.vertex_count} vertices, {g.edge_count} edges; best of {args.repeat}")
    print(f"{'kernel':<44}{'compiled s':>12}{'python s':>12}{'speedup':>10}")
    for name, run in cases(g, args.sources, args.walkers, args.steps):
        t_c, out_c = best_of(lambda: run(cc), args.repeat)
        t_p, out_p = best_of(lambda: run(py), args.repeat)
        if not np.array_equal(np.asarray(out_c), np.asarray(out_p)):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<44}{t_c:>12.4f}{t_p:>12.4f}{t_p / t_c:>9.1f}x")


if __name__ == "__main__":
    main()
