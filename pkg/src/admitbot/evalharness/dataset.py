"""Labeled evaluation dataset: JSON-lines, one case per line.

Line schema: {"id", "question", "reference_answer", "source_doc_ids": [],
"answerable": bool}. A case is answerable exactly when it has gold
sources; the loader rejects contradictions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import InconsistentAnswerable, SchemaViolation
from ..tokenize import count_tokens

_REQUIRED = ("id", "question", "reference_answer", "source_doc_ids", "answerable")


@dataclass
class EvalCase:
    id: str
    question: str
    reference_answer: str
    source_doc_ids: list[str]
    answerable: bool


@dataclass
class DatasetSummary:
    n_cases: int
    n_answerable: int
    n_unanswerable: int
    mean_question_tokens: float
    mean_answer_tokens: float
    mean_sources: float


def load_dataset(path: str | Path) -> tuple[list[EvalCase], DatasetSummary]:
    cases: list[EvalCase] = []
    seen_ids: set[str] = set()
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    line_no = 0
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(line_no, f"invalid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise SchemaViolation(line_no, "expected a JSON object")
        missing = [k for k in _REQUIRED if k not in raw]
        if missing:
            raise SchemaViolation(line_no, f"missing fields: {missing}")
        if not isinstance(raw["source_doc_ids"], list):
            raise SchemaViolation(line_no, "source_doc_ids must be a list")
        if not isinstance(raw["answerable"], bool):
            raise SchemaViolation(line_no, "answerable must be a boolean")
        case = EvalCase(
            id=str(raw["id"]),
            question=str(raw["question"]),
            reference_answer=str(raw["reference_answer"]),
            source_doc_ids=[str(s) for s in raw["source_doc_ids"]],
            answerable=raw["answerable"],
        )
        if case.id in seen_ids:
            raise SchemaViolation(line_no, f"duplicate case id {case.id!r}")
        seen_ids.add(case.id)
        if case.answerable != bool(case.source_doc_ids):
            raise InconsistentAnswerable(line_no, case.id)
        cases.append(case)
    if not cases:
        raise SchemaViolation(max(line_no, 1), "dataset contains no cases")

    n_ans = sum(c.answerable for c in cases)
    summary = DatasetSummary(
        n_cases=len(cases),
        n_answerable=n_ans,
        n_unanswerable=len(cases) - n_ans,
        mean_question_tokens=_mean([count_tokens(c.question) for c in cases]),
        mean_answer_tokens=_mean([count_tokens(c.reference_answer) for c in cases]),
        mean_sources=_mean([len(c.source_doc_ids) for c in cases]),
    )
    return cases, summary


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0
