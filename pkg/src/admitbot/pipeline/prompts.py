"""Prompt templates are shipped as plain-text assets with {placeholders};
they are configuration, not code."""

from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def load_prompt(name: str) -> str:
    ref = resources.files("admitbot.pipeline") / "prompts" / f"{name}.txt"
    return ref.read_text(encoding="utf-8")
