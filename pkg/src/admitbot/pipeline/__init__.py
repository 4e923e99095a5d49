from .abstain import DEFAULT_HEDGING_PHRASES, detect_abstention
from .answer import AnswerResult, ChatTurn, PipelineConfig, answer
from .classify import DIRECT, RETRIEVAL, classify_query
from .prompts import load_prompt

__all__ = [
    "AnswerResult",
    "ChatTurn",
    "PipelineConfig",
    "DIRECT",
    "RETRIEVAL",
    "answer",
    "classify_query",
    "detect_abstention",
    "DEFAULT_HEDGING_PHRASES",
    "load_prompt",
]
