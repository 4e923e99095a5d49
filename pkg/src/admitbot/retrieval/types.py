"""Domain types shared by all retrieval strategies."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RankedList:
    """Ordered (doc_id, score) pairs from one retriever or a fusion step."""

    entries: list[tuple[str, float]]
    retriever_tag: str

    def __post_init__(self):
        ids = [d for d, _ in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError(f"{self.retriever_tag}: duplicate doc ids in ranking")
        scores = [s for _, s in self.entries]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError(f"{self.retriever_tag}: scores must be non-increasing")

    def doc_ids(self) -> list[str]:
        return [d for d, _ in self.entries]

    def rank_of(self, doc_id: str) -> int | None:
        """1-based rank, or None when absent."""
        for i, (d, _) in enumerate(self.entries, start=1):
            if d == doc_id:
                return i
        return None

    def truncated(self, k: int) -> "RankedList":
        return RankedList(self.entries[:k], self.retriever_tag)


@dataclass
class FaqEntry:
    """Curated question linked to one or more knowledge-base documents."""

    id: str
    question: str
    doc_ids: list[str]
    question_embedding: np.ndarray | None = None  # set at index time

    def __post_init__(self):
        if not self.doc_ids:
            raise ValueError(f"FAQ {self.id}: doc_ids must be non-empty")


@dataclass
class RetrievalConfig:
    strategies: tuple[str, ...] = ("bm25", "faq")
    fusion_k: int = 60
    k_eval: int = 50
    k_generation: int = 5
    hyde_n: int = 3
    rerank: bool = False
    rerank_exclude_faq: bool = False
    bm25_k1: float = 1.2
    bm25_b: float = 0.75

    KNOWN_STRATEGIES = ("bm25", "dense", "hyde", "faq")

    def __post_init__(self):
        self.strategies = tuple(self.strategies)
        unknown = set(self.strategies) - set(self.KNOWN_STRATEGIES)
        if unknown:
            raise ValueError(f"unknown strategies: {sorted(unknown)}")
        if not self.strategies:
            raise ValueError("at least one strategy required")
        if self.k_generation > self.k_eval:
            raise ValueError("k_generation must not exceed k_eval")
        if self.hyde_n < 1:
            raise ValueError("hyde_n must be >= 1")


def ranked_from_scores(pairs: list[tuple[str, float]], k: int, tag: str) -> RankedList:
    """Sort by score descending (doc_id ascending on ties) and truncate."""
    ordered = sorted(pairs, key=lambda e: (-e[1], e[0]))[:k]
    return RankedList(ordered, tag)
