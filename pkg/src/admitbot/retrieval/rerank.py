"""Second-stage cross-encoder reranking of fused candidates."""

from __future__ import annotations

import logging

from ..errors import ProviderError
from .index import RetrievalIndex
from .types import RankedList

logger = logging.getLogger(__name__)


def rerank(index: RetrievalIndex, query: str, ranked: RankedList, reranker,
           exclude_faq: bool = False, faq_doc_ids: set[str] | None = None
           ) -> RankedList:
    """Rescore candidates with the cross-encoder and reorder.

    With exclude_faq set, FAQ-retrieved documents keep their fused
    positions at the head of the list and only the remaining candidates
    are reranked after them (the head segment then carries synthetic
    1/rank scores so the list stays monotone). An unreachable reranker
    returns the input unchanged: availability over optimality.
    """
    if not ranked.entries:
        return ranked
    protected = faq_doc_ids if exclude_faq and faq_doc_ids else set()
    head = [(d, s) for d, s in ranked.entries if d in protected]
    tail = [(d, s) for d, s in ranked.entries if d not in protected]
    if not tail:
        return RankedList(ranked.entries, "rerank")

    try:
        texts = [f"{index.document(d).title}\n{index.document(d).body_markdown}"
                 for d, _ in tail]
        scores = reranker.rerank_scores(query, texts)
    except ProviderError as exc:
        logger.warning("reranker unavailable (%s); keeping fused order", exc)
        return ranked

    reordered = [d for (d, _), _ in sorted(
        zip(tail, scores), key=lambda pair: -pair[1]
    )]
    if not head:
        pairs = sorted(zip((d for d, _ in tail), scores), key=lambda e: -e[1])
        return RankedList(list(pairs), "rerank")
    final = [d for d, _ in head] + reordered
    return RankedList([(d, 1.0 / (i + 1)) for i, d in enumerate(final)], "rerank")
