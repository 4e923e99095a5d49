"""Reciprocal rank fusion of retriever outputs."""

from __future__ import annotations

from .types import RankedList


def rrf_fuse(lists: list[RankedList], fusion_k: int = 60) -> RankedList:
    """score(d) = sum over lists containing d of 1 / (fusion_k + rank(d)),
    ranks 1-based; ties broken by lexicographic doc_id."""
    if not lists:
        raise ValueError("at least one ranked list required")
    scores: dict[str, float] = {}
    for ranked in lists:
        for rank, (doc_id, _) in enumerate(ranked.entries, start=1):
            scores[doc_id] = scores.get(doc_id, 0.0) + 1.0 / (fusion_k + rank)
    ordered = sorted(scores.items(), key=lambda e: (-e[1], e[0]))
    return RankedList(ordered, "rrf")
