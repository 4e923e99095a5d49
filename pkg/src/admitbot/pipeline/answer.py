"""Two-stage answering: route the query, retrieve if needed, generate a
grounded answer or abstain, and attach or hide sources accordingly."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from ..errors import ProviderError
from ..providers.base import ChatRequest, Message
from ..retrieval.engine import retrieve
from ..retrieval.index import RetrievalIndex
from ..retrieval.types import RetrievalConfig
from .abstain import DEFAULT_HEDGING_PHRASES, detect_abstention
from .classify import DIRECT, classify_query
from .prompts import load_prompt

logger = logging.getLogger(__name__)

OUTAGE_MESSAGE = (
    "Sorry, I am having trouble reaching the language model right now. "
    "Please try again in a moment."
)

HISTORY_TURNS = 6  # recent turns shown to the generator


@dataclass
class ChatTurn:
    role: str  # user | assistant
    text: str


@dataclass
class AnswerResult:
    text: str
    attempted: bool
    sources: list[tuple[str, str, str]]  # (doc_id, title, source_url)
    route: str  # retrieval | direct
    latency: float = 0.0

    def __post_init__(self):
        if not self.attempted and self.sources:
            raise ValueError("abstaining answers must not carry sources")
        if self.route == DIRECT and self.sources:
            raise ValueError("direct answers must not carry sources")


@dataclass
class PipelineConfig:
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    fallback_phrases: tuple[str, ...] = DEFAULT_HEDGING_PHRASES
    history_turns: int = HISTORY_TURNS
    temperature: float = 0.7
    max_tokens: int = 1024


def _history_text(history: list[ChatTurn], limit: int) -> str:
    recent = history[-limit:] if limit else []
    return "\n".join(f"{t.role}: {t.text}" for t in recent) or "(none)"


def _document_block(index: RetrievalIndex, doc_ids: list[str]) -> str:
    parts = []
    for doc_id in doc_ids:
        doc = index.document(doc_id)
        parts.append(f"[{doc.id}] {doc.title}\n{doc.body_markdown}")
    return "\n\n---\n\n".join(parts)


def answer(history: list[ChatTurn], query: str, index: RetrievalIndex,
           config: PipelineConfig, generator, reranker=None) -> AnswerResult:
    """Answer one user query against the knowledge base.

    Retrieval uses the raw final query only; the conversation history is
    shown to the generator but not to the retrievers.
    """
    started = time.perf_counter()
    route = classify_query(history, query, generator)
    history_text = _history_text(history, config.history_turns)

    if route == DIRECT:
        prompt = load_prompt("direct").format(history=history_text, query=query)
        try:
            text = generator.chat_complete(_single(prompt, config))[0]
        except ProviderError as exc:
            logger.warning("direct generation failed: %s", exc)
            return AnswerResult(OUTAGE_MESSAGE, attempted=False, sources=[],
                                route=route, latency=time.perf_counter() - started)
        return AnswerResult(text, attempted=True, sources=[], route=route,
                            latency=time.perf_counter() - started)

    try:
        ranked = retrieve(index, query, config.retrieval, mode="generation",
                          generator=generator, reranker=reranker)
    except ProviderError as exc:
        logger.warning("retrieval failed: %s", exc)
        return AnswerResult(OUTAGE_MESSAGE, attempted=False, sources=[],
                            route=route, latency=time.perf_counter() - started)

    doc_ids = ranked.doc_ids()
    prompt = load_prompt("generator").format(
        documents=_document_block(index, doc_ids) or "(no documents retrieved)",
        history=history_text,
        query=query,
    )
    try:
        text = generator.chat_complete(_single(prompt, config))[0]
    except ProviderError as exc:
        logger.warning("answer generation failed: %s", exc)
        return AnswerResult(OUTAGE_MESSAGE, attempted=False, sources=[],
                            route=route, latency=time.perf_counter() - started)

    if detect_abstention(text, config.fallback_phrases) or not doc_ids:
        return AnswerResult(text, attempted=False, sources=[], route=route,
                            latency=time.perf_counter() - started)
    sources = [(d, index.document(d).title, index.document(d).source_url)
               for d in doc_ids]
    return AnswerResult(text, attempted=True, sources=sources, route=route,
                        latency=time.perf_counter() - started)


def _single(prompt: str, config: PipelineConfig) -> ChatRequest:
    return ChatRequest(messages=[Message("user", prompt)],
                       temperature=config.temperature,
                       max_tokens=config.max_tokens, n=1)
