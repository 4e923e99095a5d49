"""Deterministic offline providers.

These stand-ins let every part of the engine run (and be tested) without a
model server: a hashed character-trigram embedder, a pattern-matching
scripted chat stub, and a token-overlap reranker.
"""

from __future__ import annotations

import hashlib
import logging
import re
import threading

import numpy as np

from ..errors import ProviderRefusal
from ..tokenize import tokenize_lower
from .base import ChatRequest, EmbeddingVector

logger = logging.getLogger(__name__)


def _bucket(ngram: str, dim: int) -> int:
    # hashlib, not hash(): must be bit-stable across processes
    digest = hashlib.blake2b(ngram.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") % dim


class HashedNgramEmbedder:
    """Embeds text as L2-normalized hashed character-trigram counts.

    A pure function of its input: equal text yields bit-equal vectors in
    any process. Texts longer than max_chars are truncated with a warning.
    """

    def __init__(self, dim: int = 256, max_chars: int = 8192):
        self.dim = dim
        self.max_chars = max_chars

    def embed(self, texts: list[str]) -> list[EmbeddingVector]:
        if not texts:
            raise ValueError("texts must be non-empty")
        return [self._embed_one(t) for t in texts]

    def _embed_one(self, text: str) -> EmbeddingVector:
        if len(text) > self.max_chars:
            logger.warning(
                "truncating %d-char text to %d chars for embedding",
                len(text), self.max_chars,
            )
            text = text[: self.max_chars]
        norm_text = " ".join(text.lower().split())
        vec = np.zeros(self.dim, dtype=np.float64)
        if len(norm_text) >= 3:
            for i in range(len(norm_text) - 2):
                vec[_bucket(norm_text[i : i + 3], self.dim)] += 1.0
        elif norm_text:
            vec[_bucket(norm_text, self.dim)] = 1.0
        else:
            vec[0] = 1.0
        vec /= np.linalg.norm(vec)
        return EmbeddingVector(vec, normalized=True)


class ScriptedStubChat:
    """Chat provider replaying pre-registered responses.

    Rules are (pattern, response) pairs; the first rule whose pattern
    matches the last user message (case-insensitive regex search) wins and
    its response is returned n times. No match raises ProviderRefusal, so
    tests never silently get an unscripted answer.
    """

    def __init__(self, rules: list[tuple[str, str]]):
        self._rules = [(re.compile(p, re.IGNORECASE), r) for p, r in rules]

    def chat_complete(self, req: ChatRequest) -> list[str]:
        prompt = req.last_user_content()
        for pattern, response in self._rules:
            if pattern.search(prompt):
                return [response] * req.n
        raise ProviderRefusal(f"no scripted response matches: {prompt[:120]!r}")


class OverlapReranker:
    """Scores (query, doc) pairs by Jaccard overlap of their token sets."""

    def rerank_scores(self, query: str, docs: list[str]) -> list[float]:
        if not docs:
            raise ValueError("docs must be non-empty")
        q = set(tokenize_lower(query))
        scores = []
        for doc in docs:
            d = set(tokenize_lower(doc))
            union = q | d
            scores.append(len(q & d) / len(union) if union else 0.0)
        return scores


class RecordingChat(ScriptedStubChat):
    """Scripted stub that also records every request it serves."""

    def __init__(self, rules: list[tuple[str, str]]):
        super().__init__(rules)
        self.requests: list[ChatRequest] = []
        self._lock = threading.Lock()

    def chat_complete(self, req: ChatRequest) -> list[str]:
        with self._lock:
            self.requests.append(req)
        return super().chat_complete(req)
