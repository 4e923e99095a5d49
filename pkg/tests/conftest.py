import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_data import campus_corpus, campus_faqs, campus_queries  # noqa: E402

from admitbot.providers.offline import HashedNgramEmbedder
from admitbot.retrieval.index import RetrievalIndex


@pytest.fixture(scope="session")
def embedder():
    return HashedNgramEmbedder()


@pytest.fixture(scope="session")
def campus_index(embedder):
    return RetrievalIndex(campus_corpus(), campus_faqs(), embedder)


@pytest.fixture(scope="session")
def campus_query_set():
    return campus_queries()
