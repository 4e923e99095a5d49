"""Top-level retrieval entry point combining strategies, fusion, reranking."""

from __future__ import annotations

import logging

from ..errors import ProviderError
from .fusion import rrf_fuse
from .index import RetrievalIndex
from .rerank import rerank
from .strategies import bm25_search, dense_search, faq_search, hyde_search
from .types import RankedList, RetrievalConfig

logger = logging.getLogger(__name__)


def retrieve(index: RetrievalIndex, query: str, config: RetrievalConfig,
             mode: str = "eval", generator=None, reranker=None) -> RankedList:
    """Run every enabled strategy, fuse with RRF, optionally rerank,
    truncate to the mode's cutoff (eval: k_eval, generation: k_generation).

    Provider errors propagate only when every enabled strategy fails.
    """
    if mode not in ("eval", "generation"):
        raise ValueError(f"unknown mode {mode!r}")
    k = config.k_eval
    lists: list[RankedList] = []
    errors: list[Exception] = []
    for strategy in config.strategies:
        try:
            if strategy == "bm25":
                lists.append(bm25_search(index, query, k,
                                         k1=config.bm25_k1, b=config.bm25_b))
            elif strategy == "dense":
                lists.append(dense_search(index, query, k))
            elif strategy == "hyde":
                lists.append(hyde_search(index, query, config.hyde_n,
                                         generator, k))
            elif strategy == "faq":
                lists.append(faq_search(index, query, k))
        except ProviderError as exc:
            logger.warning("strategy %s failed: %s", strategy, exc)
            errors.append(exc)
    if not lists:
        raise errors[0] if errors else RuntimeError("no strategy produced results")

    fused = rrf_fuse(lists, config.fusion_k).truncated(config.k_eval)
    if config.rerank and reranker is not None:
        fused = rerank(index, query, fused, reranker,
                       exclude_faq=config.rerank_exclude_faq,
                       faq_doc_ids=index.faq_doc_ids)
    cutoff = config.k_generation if mode == "generation" else config.k_eval
    return fused.truncated(cutoff)
