from .engine import retrieve
from .fusion import rrf_fuse
from .index import RetrievalIndex, load_faq_file, load_index, save_index
from .rerank import rerank
from .strategies import bm25_search, dense_search, faq_search, hyde_search
from .types import FaqEntry, RankedList, RetrievalConfig

__all__ = [
    "RankedList",
    "FaqEntry",
    "RetrievalConfig",
    "RetrievalIndex",
    "load_faq_file",
    "save_index",
    "load_index",
    "bm25_search",
    "dense_search",
    "hyde_search",
    "faq_search",
    "rrf_fuse",
    "rerank",
    "retrieve",
]
