"""LLM-as-judge scoring: faithfulness, relevance, attempt detection."""

from __future__ import annotations

import logging

from ..errors import ProviderError, UnparseableVerdict
from ..pipeline.abstain import detect_abstention
from ..pipeline.prompts import load_prompt
from ..providers.base import ChatRequest, Message

logger = logging.getLogger(__name__)


def _ask(judge, prompt: str, n: int = 1) -> list[str]:
    req = ChatRequest(messages=[Message("user", prompt)], temperature=0.0, n=n)
    return judge.chat_complete(req)


def _yes_no(judge, prompt: str) -> bool:
    """One verdict call, re-asked once on unparseable output."""
    for attempt in range(2):
        word = _ask(judge, prompt)[0].strip().split()
        label = word[0].upper().rstrip(".,") if word else ""
        if label in ("YES", "NO"):
            return label == "YES"
        logger.warning("unparseable judge verdict (attempt %d): %r", attempt + 1, word)
    raise UnparseableVerdict(prompt[:120])


def judge_faithfulness(answer: str, retrieved_texts: list[str], judge) -> float:
    """Fraction of answer claims supported by the retrieved context.

    Two-step: extract claims (one per line), then a supported/unsupported
    verdict per claim. An answer with no claims scores 1 when it is an
    abstention (nothing unsupported was asserted), 0 otherwise.
    """
    extraction = _ask(judge, load_prompt("faithfulness_claims").format(answer=answer))[0]
    claims = [line.strip() for line in extraction.splitlines() if line.strip()]
    if not claims or claims[0].upper() == "NONE":
        return 1.0 if detect_abstention(answer) else 0.0
    context = "\n\n".join(retrieved_texts)
    supported = 0
    for claim in claims:
        prompt = load_prompt("faithfulness_verdict").format(context=context, claim=claim)
        if _yes_no(judge, prompt):
            supported += 1
    return supported / len(claims)


def judge_relevance(answer: str, query: str, n_questions: int, judge,
                    embedder) -> float:
    """Mean cosine similarity between the query embedding and embeddings of
    n questions generated from the answer, clamped to [0, 1]."""
    if n_questions < 1:
        raise ValueError("n_questions must be >= 1")
    raw = _ask(judge, load_prompt("relevance_questions").format(
        n=n_questions, answer=answer))[0]
    questions = [q.strip() for q in raw.splitlines() if q.strip()][:n_questions]
    if not questions:
        raise ProviderError("judge produced no questions")
    qvec = embedder.embed([query])[0]
    sims = [qvec.cosine(v) for v in embedder.embed(questions)]
    return max(0.0, sum(sims) / len(sims))


def judge_attempt(answer: str, judge) -> bool:
    """Tier-2 abstention detection: ask the judge whether the response is
    an answer attempt or a hedge."""
    for attempt in range(2):
        word = _ask(judge, load_prompt("hedging_judge").format(answer=answer))[0]
        label = word.strip().split()[0].upper().rstrip(".,") if word.strip() else ""
        if label in ("ATTEMPT", "ABSTAIN"):
            return label == "ATTEMPT"
        logger.warning("unparseable attempt label (attempt %d): %r", attempt + 1, word)
    raise UnparseableVerdict(answer[:120])
