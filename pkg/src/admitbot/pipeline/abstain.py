"""Abstention detection.

Tier 1 (used by the live pipeline): case-insensitive matching against a
configurable family of hedging templates. An empty generation also counts
as an abstention so no sourceless blank bubble ever reaches a user.
Tier 2 (evaluation only) lives in the eval harness and asks an LLM judge.
"""

from __future__ import annotations

DEFAULT_HEDGING_PHRASES = (
    "unfortunately, i cannot answer based on",
    "unfortunately, i do not have any information",
    "unfortunately, i don't have any information",
    "i don't know",
    "i do not know",
    "the documents do not provide",
    "the provided documents do not contain",
    "i cannot answer this question",
)


def detect_abstention(text: str,
                      phrases: tuple[str, ...] = DEFAULT_HEDGING_PHRASES) -> bool:
    if not text or not text.strip():
        return True
    lowered = text.lower()
    return any(p in lowered for p in phrases)
