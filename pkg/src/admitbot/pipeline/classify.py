"""LLM-based routing of queries to the retrieval or direct path."""

from __future__ import annotations

import logging

from ..errors import ProviderError
from ..providers.base import ChatRequest, Message
from .prompts import load_prompt

logger = logging.getLogger(__name__)

RETRIEVAL = "retrieval"
DIRECT = "direct"


def _format_history(history, max_turns: int) -> str:
    turns = history[-max_turns:] if max_turns else []
    return "\n".join(f"{t.role}: {t.text}" for t in turns) or "(none)"


def classify_query(history, query: str, generator) -> str:
    """Returns "retrieval" or "direct".

    The classifier sees the last user turn plus one preceding exchange.
    Unparseable output or an unreachable provider defaults to retrieval:
    the grounded path is the safe one.
    """
    prompt = load_prompt("classifier").format(
        history=_format_history(history, 2), query=query
    )
    req = ChatRequest(messages=[Message("user", prompt)], temperature=0.0, n=1)
    try:
        label = generator.chat_complete(req)[0].strip().split()[0].upper()
    except (ProviderError, IndexError) as exc:
        logger.warning("query classifier failed (%s); defaulting to retrieval", exc)
        return RETRIEVAL
    if label.startswith("DIRECT"):
        return DIRECT
    if label.startswith("RETRIEVAL"):
        return RETRIEVAL
    logger.warning("unparseable classifier label %r; defaulting to retrieval", label)
    return RETRIEVAL
