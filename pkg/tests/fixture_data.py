"""Deterministic synthetic fixtures shared across the test suite.

The "campus" fixture is a 30-document corpus with 12 FAQs (each covering
one gold document) and 20 labeled queries, constructed so that the FAQ
retriever is decisively better than plain BM25: every query paraphrases
one FAQ question, while term-stuffed distractor documents outrank the gold
document lexically.
"""

from __future__ import annotations

import json
import random

from admitbot.ingest.corpus import CorpusManifest, Document
from admitbot.retrieval.types import FaqEntry
from admitbot.tokenize import count_tokens

TOPICS = [
    "deadline", "language", "requirements", "fees", "visa", "housing",
    "scholarship", "courses", "transfer", "enrollment", "exams", "credits",
]


def _doc(doc_id: str, title: str, body: str) -> Document:
    return Document(
        id=doc_id, source_url=f"https://u.example/{doc_id}", title=title,
        body_markdown=body, links={}, token_count=count_tokens(body),
        fetched_at="2026-01-01T00:00:00Z",
    )


def campus_corpus() -> CorpusManifest:
    docs = []
    for j, topic in enumerate(TOPICS):
        # mentions the topic exactly once; term-stuffed distractors outrank
        # it lexically, so only the FAQ link recovers it reliably
        body = (
            f"Official guide to {topic} number {j} for the data science "
            f"master program. This page explains what applicants must "
            f"know about admission to the university."
        )
        docs.append(_doc(f"gold-{j:02d}", f"Guide to {topic}", body))
    for i in range(18):
        topic = TOPICS[i % 12]
        other = TOPICS[(i + 1) % 12]
        stuffing = " ".join([topic] * 8 + [other] * 4)
        body = (
            f"Archive page about the {stuffing} for the data science "
            f"master program university notes and historical announcements."
        )
        docs.append(_doc(f"dist-{i:02d}", f"Archive {i}", body))
    return CorpusManifest(
        documents=docs, page_count=len(docs),
        mean_token_length=sum(d.token_count for d in docs) / len(docs),
    )


def campus_faqs() -> list[FaqEntry]:
    return [
        FaqEntry(
            id=f"faq-{j:02d}",
            question=f"What about the {topic} for the data science master?",
            doc_ids=[f"gold-{j:02d}"],
        )
        for j, topic in enumerate(TOPICS)
    ]


def campus_queries() -> list[tuple[str, str]]:
    """20 (query, gold_doc_id) pairs; queries paraphrase the FAQ questions."""
    queries = []
    for i in range(20):
        topic = TOPICS[i % 12]
        if i < 12:
            text = f"What about the {topic} for the data science masters degree?"
        else:
            text = f"Tell me what about the {topic} for the data science master"
        queries.append((text, f"gold-{i % 12:02d}"))
    return queries


def campus_dataset_jsonl() -> str:
    """Eval dataset over the campus fixture (answerable cases only)."""
    lines = []
    for i, (query, gold) in enumerate(campus_queries()):
        lines.append(json.dumps({
            "id": f"q{i:02d}",
            "question": query,
            "reference_answer": f"See the guide to {TOPICS[i % 12]}.",
            "source_doc_ids": [gold],
            "answerable": True,
        }))
    return "\n".join(lines) + "\n"


def paper_shaped_dataset_jsonl() -> str:
    """95 cases, 76 answerable / 19 unanswerable (summary-stat shape)."""
    lines = []
    for i in range(95):
        answerable = i < 76
        lines.append(json.dumps({
            "id": f"case-{i:03d}",
            "question": f"Synthetic question number {i} about admission topic "
                        f"{TOPICS[i % 12]}?",
            "reference_answer": f"Synthetic reference answer {i}.",
            "source_doc_ids": [f"gold-{i % 12:02d}"] if answerable else [],
            "answerable": answerable,
        }))
    return "\n".join(lines) + "\n"


def large_corpus(n_docs: int = 250, tokens_per_doc: int = 700,
                 seed: int = 7) -> tuple[CorpusManifest, list[FaqEntry]]:
    """Corpus at deployment scale for latency measurements."""
    rng = random.Random(seed)
    vocab = [f"term{i:03d}" for i in range(800)] + TOPICS * 10
    docs = []
    for d in range(n_docs):
        body = " ".join(rng.choice(vocab) for _ in range(tokens_per_doc))
        docs.append(_doc(f"doc-{d:03d}", f"Page {d}", body))
    faqs = [
        FaqEntry(
            id=f"faq-{j:02d}",
            question=f"How does {rng.choice(vocab)} relate to "
                     f"{rng.choice(vocab)} at the university?",
            doc_ids=[f"doc-{rng.randrange(n_docs):03d}"],
        )
        for j in range(36)
    ]
    return CorpusManifest(
        documents=docs, page_count=len(docs),
        mean_token_length=sum(d.token_count for d in docs) / len(docs),
    ), faqs
