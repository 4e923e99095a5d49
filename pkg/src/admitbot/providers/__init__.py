from .base import ChatRequest, EmbeddingVector, Message, ProviderConfig
from .config import build_providers, load_provider_config
from .http import HttpChatProvider, HttpEmbeddingProvider, HttpRerankProvider
from .offline import HashedNgramEmbedder, OverlapReranker, ScriptedStubChat

__all__ = [
    "ChatRequest",
    "EmbeddingVector",
    "Message",
    "ProviderConfig",
    "HashedNgramEmbedder",
    "OverlapReranker",
    "ScriptedStubChat",
    "HttpChatProvider",
    "HttpEmbeddingProvider",
    "HttpRerankProvider",
    "build_providers",
    "load_provider_config",
]
