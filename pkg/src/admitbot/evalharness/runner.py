"""Offline evaluation runner producing a versioned JSON metric report."""

from __future__ import annotations

import logging
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..errors import AdmitbotError, ProviderError
from ..pipeline.abstain import detect_abstention
from ..pipeline.prompts import load_prompt
from ..providers.base import ChatRequest, Message
from ..retrieval.engine import retrieve
from ..retrieval.index import RetrievalIndex
from ..retrieval.types import RankedList, RetrievalConfig
from ..tokenize import count_tokens
from .dataset import EvalCase
from .judges import judge_attempt, judge_faithfulness, judge_relevance
from .metrics import mrr, recall_at_k, rouge1_f1, selectivity

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
DEFAULT_RECALL_KS = (1, 5, 50)


@dataclass
class GenerationRecord:
    case_id: str
    generations: list[tuple[str, bool, float]]  # (text, attempted, latency)
    retrieved: RankedList


@dataclass
class EvalOptions:
    mode: str = "both"  # retrieval | generation | both
    m_generations: int = 3
    temperature: float = 0.7
    recall_ks: tuple[int, ...] = DEFAULT_RECALL_KS
    n_relevance_questions: int = 3
    use_judge_attempt: bool = False
    parallelism: int = 1
    failures: list[dict] = field(default_factory=list)


def _timed_retrieve(index, query, config, generator, reranker, mode):
    start = time.perf_counter()
    ranked = retrieve(index, query, config, mode=mode,
                      generator=generator, reranker=reranker)
    return ranked, time.perf_counter() - start


def _retrieval_section(index: RetrievalIndex, config: RetrievalConfig,
                       cases: list[EvalCase], generator, reranker,
                       opts: EvalOptions, per_case: list[dict]) -> dict:
    answerable = [c for c in cases if c.answerable]
    if answerable:  # warmup pass so timings reflect a hot pipeline
        retrieve(index, answerable[0].question, config, mode="eval",
                 generator=generator, reranker=reranker)
    rankings: dict[str, RankedList] = {}
    truth: dict[str, set[str]] = {}
    timings: list[float] = []

    def one(case: EvalCase):
        ranked, elapsed = _timed_retrieve(index, case.question, config,
                                          generator, reranker, "eval")
        return case, ranked, elapsed

    with ThreadPoolExecutor(max_workers=max(1, opts.parallelism)) as pool:
        for case, ranked, elapsed in pool.map(one, answerable):
            rankings[case.id] = ranked
            truth[case.id] = set(case.source_doc_ids)
            timings.append(elapsed)
            per_case.append({
                "case_id": case.id, "section": "retrieval",
                "first_relevant_rank": next(
                    (r for r, (d, _) in enumerate(ranked.entries, 1)
                     if d in case.source_doc_ids), None),
                "retrieved": ranked.doc_ids(),
                "sec": elapsed,
            })
    return {
        "mrr": mrr(rankings, truth),
        "recall_at": {str(k): recall_at_k(rankings, truth, k)
                      for k in opts.recall_ks},
        "sec_per_query": statistics.fmean(timings) if timings else 0.0,
        "n_cases": len(answerable),
    }


def _generate_for_case(index, config, case, generator, reranker, judge,
                       opts: EvalOptions) -> GenerationRecord:
    started = time.perf_counter()
    ranked = retrieve(index, case.question, config, mode="generation",
                      generator=generator, reranker=reranker)
    docs = "\n\n---\n\n".join(
        f"[{d}] {index.document(d).title}\n{index.document(d).body_markdown}"
        for d in ranked.doc_ids()
    ) or "(no documents retrieved)"
    prompt = load_prompt("generator").format(
        documents=docs, history="(none)", query=case.question)
    req = ChatRequest(messages=[Message("user", prompt)],
                      temperature=opts.temperature, n=opts.m_generations)
    texts = generator.chat_complete(req)
    elapsed = time.perf_counter() - started
    generations = []
    for text in texts:
        if opts.use_judge_attempt and judge is not None:
            attempted = judge_attempt(text, judge)
        else:
            attempted = not detect_abstention(text)
        generations.append((text, attempted, elapsed / len(texts)))
    return GenerationRecord(case.id, generations, ranked)


def _stratum_metrics(records: list[GenerationRecord],
                     cases_by_id: dict[str, EvalCase], index, judge, embedder,
                     opts: EvalOptions, missing: list[str]) -> dict:
    if not records:
        return {"n_cases": 0}
    attempts = {r.case_id: [a for _, a, _ in r.generations] for r in records}
    answerable = {r.case_id: cases_by_id[r.case_id].answerable for r in records}
    rouge_values, token_counts, timings = [], [], []
    faith_values, rel_values = [], []
    for rec in records:
        case = cases_by_id[rec.case_id]
        rouge_values.append(statistics.fmean(
            rouge1_f1(text, case.reference_answer) for text, _, _ in rec.generations))
        token_counts.extend(count_tokens(text) for text, _, _ in rec.generations)
        timings.append(sum(t for _, _, t in rec.generations))
        if judge is not None and embedder is not None:
            context = [index.document(d).body_markdown for d in rec.retrieved.doc_ids()]
            try:
                faith_values.append(statistics.fmean(
                    judge_faithfulness(text, context, judge)
                    for text, _, _ in rec.generations))
                rel_values.append(statistics.fmean(
                    judge_relevance(text, case.question,
                                    opts.n_relevance_questions, judge, embedder)
                    for text, _, _ in rec.generations))
            except AdmitbotError as exc:
                logger.warning("judge failed on case %s: %s", rec.case_id, exc)
                missing.append(rec.case_id)
    out = {
        "n_cases": len(records),
        "rouge1": statistics.fmean(rouge_values),
        "selectivity": selectivity(attempts, answerable),
        "mean_answer_tokens": statistics.fmean(token_counts),
        "sec_per_query": statistics.fmean(timings),
        "faithfulness": statistics.fmean(faith_values) if faith_values else None,
        "relevance": statistics.fmean(rel_values) if rel_values else None,
    }
    return out


def run_eval(index: RetrievalIndex, config: RetrievalConfig,
             cases: list[EvalCase], generator=None, reranker=None, judge=None,
             embedder=None, opts: EvalOptions | None = None
             ) -> tuple[dict, list[dict]]:
    """Score retrieval and/or generation over the dataset.

    Returns (report, per_case_rows). Per-case provider failures are
    collected under report["failures"]; judge failures leave metric cells
    null and flag the case under report["missing_judge_cases"].
    """
    opts = opts or EvalOptions()
    if opts.mode not in ("retrieval", "generation", "both"):
        raise ValueError(f"unknown mode {opts.mode!r}")
    per_case: list[dict] = []
    report: dict = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": {
            "strategies": list(config.strategies),
            "fusion_k": config.fusion_k,
            "k_eval": config.k_eval,
            "k_generation": config.k_generation,
            "rerank": config.rerank,
            "mode": opts.mode,
            "m_generations": opts.m_generations,
            "temperature": opts.temperature,
        },
        "failures": [],
    }

    if opts.mode in ("retrieval", "both"):
        report["retrieval"] = _retrieval_section(
            index, config, cases, generator, reranker, opts, per_case)

    if opts.mode in ("generation", "both"):
        if generator is None:
            raise ValueError("generation mode requires a generator provider")
        cases_by_id = {c.id: c for c in cases}
        if cases:  # warmup
            try:
                _generate_for_case(index, config, cases[0], generator,
                                   reranker, judge, opts)
            except AdmitbotError:
                pass
        records: list[GenerationRecord] = []

        def one(case: EvalCase):
            try:
                return _generate_for_case(index, config, case, generator,
                                          reranker, judge, opts)
            except ProviderError as exc:
                report["failures"].append({"case_id": case.id, "error": str(exc)})
                return None

        with ThreadPoolExecutor(max_workers=max(1, opts.parallelism)) as pool:
            for record in pool.map(one, cases):
                if record is not None:
                    records.append(record)
                    case = cases_by_id[record.case_id]
                    for j, (text, attempted, sec) in enumerate(record.generations):
                        per_case.append({
                            "case_id": record.case_id, "section": "generation",
                            "generation": j, "attempted": attempted,
                            "answerable": case.answerable,
                            "rouge1": rouge1_f1(text, case.reference_answer),
                            "tokens": count_tokens(text), "sec": sec,
                        })
        missing: list[str] = []
        strata = {
            "answerable": [r for r in records if cases_by_id[r.case_id].answerable],
            "unanswerable": [r for r in records
                             if not cases_by_id[r.case_id].answerable],
            "all": records,
        }
        report["generation"] = {
            name: _stratum_metrics(recs, cases_by_id, index, judge, embedder,
                                   opts, missing)
            for name, recs in strata.items()
        }
        report["missing_judge_cases"] = sorted(set(missing))
    return report, per_case
