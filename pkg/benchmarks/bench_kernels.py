"""Benchmark the compiled BM25 scoring kernel against the pure-NumPy
fallback on synthetic postings at a few corpus sizes.

Usage: python3 benchmarks/bench_kernels.py [--repeats 50]
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from admitbot import kernels
from admitbot.kernels import pure


def make_postings(rng, n_docs, n_query_terms, postings_per_term):
    offsets = [0]
    doc_idx, tf = [], []
    for _ in range(n_query_terms):
        docs = rng.choice(n_docs, size=min(postings_per_term, n_docs),
                          replace=False)
        docs.sort()
        doc_idx.extend(docs)
        tf.extend(rng.integers(1, 9, size=len(docs)))
        offsets.append(len(doc_idx))
    return (
        np.asarray(offsets, dtype=np.int64),
        np.asarray(doc_idx, dtype=np.int64),
        np.asarray(tf, dtype=np.float64),
        rng.uniform(0.1, 3.0, size=n_query_terms),
        rng.uniform(0.3, 2.0, size=n_docs),
    )


def bench(fn, args, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=50)
    opts = parser.parse_args()
    rng = np.random.default_rng(0)

    print(f"active backend: {kernels.BACKEND}")
    print(f"{'n_docs':>8} {'terms':>6} {'postings':>9} "
          f"{'native ms':>10} {'pure ms':>9} {'speedup':>8}")
    for n_docs, n_terms, per_term in [
        (250, 6, 120), (2_000, 8, 800), (20_000, 10, 5_000),
        (100_000, 12, 20_000),
    ]:
        offsets, doc_idx, tf, idfs, denom = make_postings(
            rng, n_docs, n_terms, per_term)
        args = (offsets, doc_idx, tf, idfs, denom, 1.2, n_docs)
        native = bench(kernels.bm25_scores, args, opts.repeats)
        fallback = bench(pure.bm25_scores, args, opts.repeats)
        np.testing.assert_allclose(kernels.bm25_scores(*args),
                                   pure.bm25_scores(*args), atol=1e-12)
        print(f"{n_docs:>8} {n_terms:>6} {len(doc_idx):>9} "
              f"{native * 1e3:>10.3f} {fallback * 1e3:>9.3f} "
              f"{fallback / native:>7.2f}x")


if __name__ == "__main__":
    main()
