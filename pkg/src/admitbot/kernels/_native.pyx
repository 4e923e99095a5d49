# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled BM25 scoring kernel (see pure.py for the reference version)."""

import numpy as np

cimport numpy as cnp


def bm25_scores(cnp.int64_t[::1] offsets, cnp.int64_t[::1] doc_idx,
                cnp.float64_t[::1] tf, cnp.float64_t[::1] idfs,
                cnp.float64_t[::1] denom_base, double k1, Py_ssize_t n_docs):
    out = np.zeros(n_docs, dtype=np.float64)
    cdef cnp.float64_t[::1] scores = out
    cdef Py_ssize_t t, p, d
    cdef double idf, f
    for t in range(offsets.shape[0] - 1):
        idf = idfs[t]
        for p in range(offsets[t], offsets[t + 1]):
            d = doc_idx[p]
            f = tf[p]
            scores[d] += idf * f * (k1 + 1.0) / (f + denom_base[d])
    return out
