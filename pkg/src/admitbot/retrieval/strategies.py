"""The individual retrieval strategies: BM25, dense, HyDE and FAQ."""

from __future__ import annotations

import logging

import numpy as np

from .. import kernels
from ..errors import ProviderError
from ..providers.base import ChatRequest, Message
from ..tokenize import tokenize_lower
from .index import RetrievalIndex
from .types import RankedList, ranked_from_scores

logger = logging.getLogger(__name__)

HYDE_PROMPT = (
    "Write a short passage from a university admissions web page that "
    "would plausibly answer the following question. Write only the "
    "passage.\n\nQuestion: {query}"
)


def bm25_search(index: RetrievalIndex, query: str, k: int,
                k1: float = 1.2, b: float = 0.75) -> RankedList:
    """Okapi BM25 over the inverted index; zero-overlap docs are excluded."""
    post = index.postings
    terms = [post.vocab[t] for t in tokenize_lower(query) if t in post.vocab]
    if not terms:
        return RankedList([], "bm25")
    # gather the query terms' postings into one flat kernel call
    spans = [(post.offsets[t], post.offsets[t + 1]) for t in terms]
    offsets = np.zeros(len(terms) + 1, dtype=np.int64)
    np.cumsum([hi - lo for lo, hi in spans], out=offsets[1:])
    doc_idx = np.concatenate([post.doc_idx[lo:hi] for lo, hi in spans])
    tf = np.concatenate([post.tf[lo:hi] for lo, hi in spans])
    idfs = post.idf[terms]
    denom_base = k1 * (1.0 - b + b * post.doc_len / post.avgdl)
    scores = kernels.bm25_scores(offsets, doc_idx, tf, idfs, denom_base,
                                 k1, index.n_docs)
    hit = np.flatnonzero(scores > 0.0)
    pairs = [(index.doc_ids[i], float(scores[i])) for i in hit]
    return ranked_from_scores(pairs, k, "bm25")


def dense_search(index: RetrievalIndex, query_text: str, k: int) -> RankedList:
    """Cosine similarity between the query embedding and document embeddings."""
    vec = index.embed_query(query_text)
    return dense_search_with_vector(index, vec, k)


def dense_search_with_vector(index: RetrievalIndex, vec: np.ndarray,
                             k: int, tag: str = "dense") -> RankedList:
    sims = index.doc_embeddings @ vec
    pairs = list(zip(index.doc_ids, map(float, sims)))
    return ranked_from_scores(pairs, k, tag)


def hyde_search(index: RetrievalIndex, query: str, n: int, generator,
                k: int) -> RankedList:
    """Dense search with the renormalized mean embedding of n generated
    pseudo-documents; degrades to plain dense search if generation fails."""
    try:
        req = ChatRequest(
            messages=[Message("user", HYDE_PROMPT.format(query=query))],
            temperature=0.7, n=n,
        )
        pseudo_docs = generator.chat_complete(req)
    except ProviderError as exc:
        logger.warning("pseudo-document generation failed (%s); "
                       "falling back to dense search", exc)
        return dense_search(index, query, k)
    vectors = np.vstack([index.embed_query(t) for t in pseudo_docs])
    mean = vectors.mean(axis=0)
    norm = np.linalg.norm(mean)
    if norm:
        mean = mean / norm
    return dense_search_with_vector(index, mean, k, tag="hyde")


def faq_search(index: RetrievalIndex, query: str, k: int) -> RankedList:
    """Rank FAQs by question similarity, then expand to their documents.

    A document's score is the maximum similarity over FAQs linking to it;
    ties keep the linking FAQ's listed document order.
    """
    if not index.faqs:
        return RankedList([], "faq")
    qvec = index.embed_query(query)
    sims = index.faq_embeddings @ qvec
    order = sorted(range(len(index.faqs)), key=lambda i: (-sims[i], i))
    entries: list[tuple[str, float]] = []
    seen: set[str] = set()
    for i in order:  # descending similarity: first assignment is the max
        for doc_id in index.faqs[i].doc_ids:
            if doc_id not in seen:
                seen.add(doc_id)
                entries.append((doc_id, float(sims[i])))
    return RankedList(entries[:k], "faq")
