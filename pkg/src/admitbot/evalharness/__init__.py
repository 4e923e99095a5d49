from .dataset import DatasetSummary, EvalCase, load_dataset
from .judges import judge_attempt, judge_faithfulness, judge_relevance
from .metrics import mrr, recall_at_k, rouge1_f1, selectivity
from .runner import GenerationRecord, run_eval

__all__ = [
    "EvalCase",
    "DatasetSummary",
    "load_dataset",
    "mrr",
    "recall_at_k",
    "rouge1_f1",
    "selectivity",
    "judge_faithfulness",
    "judge_relevance",
    "judge_attempt",
    "GenerationRecord",
    "run_eval",
]
