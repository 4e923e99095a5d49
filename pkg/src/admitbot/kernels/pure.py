"""Pure numpy implementation of the BM25 scoring kernel."""

import numpy as np


def bm25_scores(offsets, doc_idx, tf, idfs, denom_base, k1, n_docs):
    """Accumulate Okapi BM25 scores for one query.

    offsets[t]:offsets[t+1] delimits the postings of query term t inside
    doc_idx/tf. denom_base[d] = k1 * (1 - b + b * dl[d] / avgdl) is
    precomputed per document. Returns a dense float64 score array.
    """
    scores = np.zeros(n_docs, dtype=np.float64)
    for t in range(len(offsets) - 1):
        lo, hi = offsets[t], offsets[t + 1]
        idx = doc_idx[lo:hi]
        f = tf[lo:hi]
        # postings of a single term hit each doc at most once: plain fancy
        # indexing is safe here
        scores[idx] += idfs[t] * f * (k1 + 1.0) / (f + denom_base[idx])
    return scores
