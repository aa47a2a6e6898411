#!/usr/bin/env python3
"""Benchmark the compiled skip-gram kernel against the pure-Python fallback.

Runs the same SGD pass over identical pair/negative arrays with both kernels,
checks that the resulting embeddings are bit-identical, and reports wall-clock
times plus the speedup factor.

Usage: python3 scripts/benchmark_kernels.py [--pairs N] [--dim D] [--repeats R]
"""

import argparse
import time

import numpy as np

from linkfusion import _sgns_py

try:
    from linkfusion import _sgns_cy
except ImportError:
    _sgns_cy = None


def make_workload(n_pairs, vocab, dim, negatives, seed):
    rng = np.random.default_rng(seed)
    w_in = rng.uniform(-0.5 / dim, 0.5 / dim, size=(vocab, dim))
    w_out = np.zeros((vocab, dim))
    centers = rng.integers(0, vocab, size=n_pairs)
    contexts = rng.integers(0, vocab, size=n_pairs)
    negs = np.ascontiguousarray(rng.integers(0, vocab, size=(n_pairs, negatives)))
    return w_in, w_out, centers, contexts, negs


def run(kernel, n_pairs, vocab, dim, negatives, seed, lr=0.025):
    w_in, w_out, centers, contexts, negs = make_workload(n_pairs, vocab, dim,
                                                         negatives, seed)
    start = time.perf_counter()
    kernel.sgns_train(w_in, w_out, centers, contexts, negs, lr)
    return time.perf_counter() - start, w_in, w_out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=200_000)
    ap.add_argument("--vocab", type=int, default=2_000)
    ap.add_argument("--dim", type=int, default=16)
    ap.add_argument("--negatives", type=int, default=5)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _sgns_cy is None:
        print("compiled kernel not available; showing pure-Python timings only")

    print(f"pairs={args.pairs} vocab={args.vocab} dim={args.dim} "
          f"negatives={args.negatives} repeats={args.repeats}")
    py_times, cy_times = [], []
    for r in range(args.repeats):
        t_py, in_py, out_py = run(_sgns_py, args.pairs, args.vocab, args.dim,
                                  args.negatives, seed=r)
        py_times.append(t_py)
        if _sgns_cy is not None:
            t_cy, in_cy, out_cy = run(_sgns_cy, args.pairs, args.vocab, args.dim,
                                      args.negatives, seed=r)
            cy_times.append(t_cy)
            if not (np.array_equal(in_py, in_cy) and np.array_equal(out_py, out_cy)):
                raise SystemExit("FAIL: kernels disagree — embeddings not bit-identical")

    print(f"python kernel: best {min(py_times):.3f}s  mean {np.mean(py_times):.3f}s")
    if _sgns_cy is not None:
        print(f"cython kernel: best {min(cy_times):.3f}s  mean {np.mean(cy_times):.3f}s")
        print(f"speedup (best/best): {min(py_times) / min(cy_times):.1f}x")
        print("bit-identical results: yes")


if __name__ == "__main__":
    main()
