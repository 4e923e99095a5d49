"""Provider-facing domain types and protocols.

All model inference (embeddings, chat completion, cross-encoder reranking)
sits behind these interfaces so the rest of the engine never talks to a
model server directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np

ROLES = ("system", "user", "assistant")


@dataclass(frozen=True)
class Message:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class EmbeddingVector:
    """Fixed-length real vector, optionally L2-normalized."""

    values: np.ndarray
    normalized: bool = False

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if v.ndim != 1:
            raise ValueError("embedding must be a 1-D vector")
        if self.normalized:
            norm = float(np.linalg.norm(v))
            if abs(norm - 1.0) > 1e-6:
                raise ValueError(f"normalized vector has L2 norm {norm}")

    def cosine(self, other: "EmbeddingVector") -> float:
        a, b = self.values, other.values
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if na == 0.0 or nb == 0.0:
            return 0.0
        return float(np.dot(a, b) / (na * nb))


@dataclass
class ChatRequest:
    messages: list[Message]
    temperature: float = 0.7
    max_tokens: int = 1024
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        sys_positions = [i for i, m in enumerate(self.messages) if m.role == "system"]
        if sys_positions and sys_positions != [0]:
            raise ValueError("system message must come first and be unique")

    def last_user_content(self) -> str:
        for m in reversed(self.messages):
            if m.role == "user":
                return m.content
        return ""


@dataclass
class ProviderConfig:
    kind: str = "offline-deterministic"  # http | offline-deterministic | scripted-stub
    endpoint: str | None = None
    model_name: str = ""
    timeout: float = 30.0
    retry_max_attempts: int = 3
    retry_backoff: float = 0.25
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "http" and not self.endpoint:
            raise ValueError("http provider requires an endpoint")


@runtime_checkable
class EmbeddingProvider(Protocol):
    def embed(self, texts: list[str]) -> list[EmbeddingVector]: ...


@runtime_checkable
class ChatProvider(Protocol):
    def chat_complete(self, req: ChatRequest) -> list[str]: ...


@runtime_checkable
class RerankProvider(Protocol):
    def rerank_scores(self, query: str, docs: list[str]) -> list[float]: ...
