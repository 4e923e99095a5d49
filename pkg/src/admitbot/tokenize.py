"""Unicode word tokenization used for token counts, BM25 and ROUGE.

Tokens are maximal runs of letters/digits (word characters minus the
underscore), so counts are stable across languages without binding to any
NLP toolkit.
"""

import re

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _WORD_RE.findall(text)


def tokenize_lower(text: str) -> list[str]:
    return [t.lower() for t in tokenize(text)]


def count_tokens(text: str) -> int:
    return len(tokenize(text))
