"""Provider configuration loading.

Config file keys (YAML, dotted here for brevity):

    provider.embedding.kind: http | offline-deterministic
    provider.embedding.endpoint: http://...
    provider.embedding.model_name: ...
    provider.embedding.timeout: 30
    provider.embedding.retry: {max_attempts: 3, backoff: 0.25}
    provider.generator.*   (same fields)
    provider.reranker.*    (same fields)

Environment overrides use the prefix ADMITBOT_ with ``__`` as the nesting
separator, e.g. ``ADMITBOT_PROVIDER__GENERATOR__ENDPOINT``.
"""

from __future__ import annotations

import os

from .base import ProviderConfig
from .http import HttpChatProvider, HttpEmbeddingProvider, HttpRerankProvider
from .offline import HashedNgramEmbedder, OverlapReranker, ScriptedStubChat

ENV_PREFIX = "ADMITBOT_"

_ROLES = ("embedding", "generator", "reranker")


def _apply_env_overrides(config: dict, environ=None) -> dict:
    environ = os.environ if environ is None else environ
    for key, value in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        path = key[len(ENV_PREFIX):].lower().split("__")
        node = config
        for part in path[:-1]:
            node = node.setdefault(part, {})
        node[path[-1]] = value
    return config


def _parse_one(raw: dict) -> ProviderConfig:
    retry = raw.get("retry", {})
    return ProviderConfig(
        kind=raw.get("kind", "offline-deterministic"),
        endpoint=raw.get("endpoint"),
        model_name=raw.get("model_name", ""),
        timeout=float(raw.get("timeout", 30.0)),
        retry_max_attempts=int(retry.get("max_attempts", 3)),
        retry_backoff=float(retry.get("backoff", 0.25)),
        extra={k: v for k, v in raw.items()
               if k not in ("kind", "endpoint", "model_name", "timeout", "retry")},
    )


def load_provider_config(config: dict, environ=None) -> dict[str, ProviderConfig]:
    """Parse the ``provider`` section of a config dict (env vars win)."""
    config = _apply_env_overrides(dict(config), environ)
    section = config.get("provider", {})
    return {role: _parse_one(section.get(role, {})) for role in _ROLES}


def build_providers(configs: dict[str, ProviderConfig]) -> dict[str, object]:
    """Instantiate one provider per role from parsed configs.

    The scripted-stub kind is intentionally not constructible from config:
    stubs carry test-defined response rules and are injected in code.
    """
    out: dict[str, object] = {}
    for role, cfg in configs.items():
        if cfg.kind == "http":
            cls = {
                "embedding": HttpEmbeddingProvider,
                "generator": HttpChatProvider,
                "reranker": HttpRerankProvider,
            }[role]
            out[role] = cls(cfg)
        elif cfg.kind == "offline-deterministic":
            if role == "embedding":
                out[role] = HashedNgramEmbedder(
                    dim=int(cfg.extra.get("dim", 256)),
                    max_chars=int(cfg.extra.get("max_chars", 8192)),
                )
            elif role == "reranker":
                out[role] = OverlapReranker()
            else:
                # a deterministic generator without a script cannot answer
                out[role] = ScriptedStubChat([])
        else:
            raise ValueError(f"cannot build provider kind {cfg.kind!r} from config")
    return out
