"""Retrieval and generation metrics."""

from __future__ import annotations

from collections import Counter

from ..retrieval.types import RankedList
from ..tokenize import tokenize_lower


def mrr(rankings: dict[str, RankedList], truth: dict[str, set[str]]) -> float:
    """Mean over cases of 1/rank of the first relevant document (0 when
    none is retrieved)."""
    if not rankings:
        return 0.0
    total = 0.0
    for case_id, ranked in rankings.items():
        relevant = truth.get(case_id, set())
        for rank, (doc_id, _) in enumerate(ranked.entries, start=1):
            if doc_id in relevant:
                total += 1.0 / rank
                break
    return total / len(rankings)


def recall_at_k(rankings: dict[str, RankedList], truth: dict[str, set[str]],
                k: int) -> float:
    """Mean over cases of |relevant ∩ top-k| / |relevant|. Cases with empty
    truth are excluded (only answerable cases enter retrieval metrics)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    values = []
    for case_id, ranked in rankings.items():
        relevant = truth.get(case_id, set())
        if not relevant:
            continue
        top = {d for d, _ in ranked.entries[:k]}
        values.append(len(relevant & top) / len(relevant))
    return sum(values) / len(values) if values else 0.0


def rouge1_f1(candidate: str, reference: str) -> float:
    """Unigram-overlap F1 on lowercased word tokens with clipped counts."""
    cand = Counter(tokenize_lower(candidate))
    ref = Counter(tokenize_lower(reference))
    n_cand, n_ref = sum(cand.values()), sum(ref.values())
    if n_cand == 0 or n_ref == 0:
        return 0.0
    overlap = sum(min(c, ref[t]) for t, c in cand.items())
    if overlap == 0:
        return 0.0
    precision = overlap / n_cand
    recall = overlap / n_ref
    return 2 * precision * recall / (precision + recall)


def selectivity(attempts: dict[str, list[bool]], answerable: dict[str, bool]) -> float:
    """(1/N) * sum_i (1/M_i) * sum_j 1[attempt_{i,j} == answerable_i].

    attempts maps case id to the per-generation attempt flags; answerable
    maps case id to the ground-truth label.
    """
    if not attempts:
        return 0.0
    total = 0.0
    for case_id, flags in attempts.items():
        if not flags:
            raise ValueError(f"case {case_id}: no generations")
        y = answerable[case_id]
        total += sum(1 for a in flags if a == y) / len(flags)
    return total / len(attempts)
