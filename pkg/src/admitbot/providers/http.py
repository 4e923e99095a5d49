"""HTTP providers speaking the common open-inference JSON wire formats.

Chat: POST <endpoint>/v1/chat/completions with
  {"model", "messages": [{"role","content"}], "temperature", "n", "max_tokens"}
  -> {"choices": [{"message": {"content": ...}}, ...]}
Embeddings: POST <endpoint>/v1/embeddings with {"model", "input": [...]}
  -> {"data": [{"embedding": [...]}, ...]}
Rerank: POST <endpoint>/v1/rerank with {"model", "query", "documents": [...]}
  -> {"scores": [...]} (or {"results": [{"index", "relevance_score"}]})

Transient failures are retried with exponential backoff and surface as
ProviderUnreachable after retry exhaustion, never as empty results.
"""

from __future__ import annotations

import logging
import time

import httpx
import numpy as np

from ..errors import DimensionMismatch, ProviderRefusal, ProviderUnreachable
from .base import ChatRequest, EmbeddingVector, ProviderConfig

logger = logging.getLogger(__name__)


class _HttpProvider:
    def __init__(self, config: ProviderConfig, client: httpx.Client | None = None):
        if config.kind != "http":
            raise ValueError("config.kind must be 'http'")
        self.config = config
        # httpx.Client is thread-safe; one shared handle per provider
        self._client = client or httpx.Client(timeout=config.timeout)

    def _post(self, path: str, payload: dict) -> dict:
        url = self.config.endpoint.rstrip("/") + path
        last_error: Exception | None = None
        for attempt in range(self.config.retry_max_attempts):
            if attempt:
                time.sleep(self.config.retry_backoff * 2 ** (attempt - 1))
            try:
                resp = self._client.post(url, json=payload)
                if resp.status_code >= 500:
                    last_error = ProviderUnreachable(f"{url} -> {resp.status_code}")
                    continue
                resp.raise_for_status()
                return resp.json()
            except httpx.HTTPError as exc:
                last_error = exc
                logger.warning("provider call failed (attempt %d): %s", attempt + 1, exc)
        raise ProviderUnreachable(f"{url}: {last_error}")


class HttpEmbeddingProvider(_HttpProvider):
    def embed(self, texts: list[str]) -> list[EmbeddingVector]:
        if not texts:
            raise ValueError("texts must be non-empty")
        body = self._post(
            "/v1/embeddings", {"model": self.config.model_name, "input": texts}
        )
        rows = [np.asarray(item["embedding"], dtype=np.float64) for item in body["data"]]
        if len(rows) != len(texts):
            raise DimensionMismatch(
                f"expected {len(texts)} embeddings, got {len(rows)}"
            )
        dims = {row.shape[0] for row in rows}
        if len(dims) != 1:
            raise DimensionMismatch(f"inconsistent embedding dims: {sorted(dims)}")
        return [EmbeddingVector(row) for row in rows]


class HttpChatProvider(_HttpProvider):
    def chat_complete(self, req: ChatRequest) -> list[str]:
        body = self._post(
            "/v1/chat/completions",
            {
                "model": self.config.model_name,
                "messages": [{"role": m.role, "content": m.content} for m in req.messages],
                "temperature": req.temperature,
                "max_tokens": req.max_tokens,
                "n": req.n,
            },
        )
        texts = [c["message"]["content"] or "" for c in body["choices"]]
        if not texts or all(not t.strip() for t in texts):
            raise ProviderRefusal("provider returned empty content")
        return texts


class HttpRerankProvider(_HttpProvider):
    def rerank_scores(self, query: str, docs: list[str]) -> list[float]:
        if not docs:
            raise ValueError("docs must be non-empty")
        body = self._post(
            "/v1/rerank",
            {"model": self.config.model_name, "query": query, "documents": docs},
        )
        if "scores" in body:
            return [float(s) for s in body["scores"]]
        scores = [0.0] * len(docs)
        for item in body["results"]:
            scores[item["index"]] = float(item["relevance_score"])
        return scores
