"""Immutable retrieval index: inverted postings, embeddings, FAQ matrix.

Built once from a corpus manifest plus the FAQ file; document and FAQ
embeddings are precomputed here so queries never embed documents. The
index is read-only after build and safe to share across request handlers;
replacing it is an atomic reference swap done by the caller.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyCorpus, UnresolvedFaqDocId
from ..ingest.corpus import CorpusManifest, Document
from ..tokenize import tokenize_lower
from .types import FaqEntry


@dataclass
class _Postings:
    """Per-term postings in flat arrays, ready for the scoring kernel."""

    vocab: dict[str, int]
    offsets: np.ndarray  # int64, len = n_terms + 1
    doc_idx: np.ndarray  # int64, concatenated doc positions
    tf: np.ndarray       # float64, matching term frequencies
    idf: np.ndarray      # float64 per term
    doc_len: np.ndarray  # float64 per doc
    avgdl: float


def _normalize_rows(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return matrix / norms


class RetrievalIndex:
    def __init__(self, manifest: CorpusManifest, faqs: list[FaqEntry],
                 embedding_provider, doc_embeddings: np.ndarray | None = None,
                 faq_embeddings: np.ndarray | None = None):
        if not manifest.documents:
            raise EmptyCorpus("manifest contains no documents")
        known = {d.id for d in manifest.documents}
        offending = {
            f.id: [d for d in f.doc_ids if d not in known]
            for f in faqs if any(d not in known for d in f.doc_ids)
        }
        if offending:
            raise UnresolvedFaqDocId(offending)

        self.documents: list[Document] = list(manifest.documents)
        self.doc_ids = [d.id for d in self.documents]
        self.doc_pos = {d: i for i, d in enumerate(self.doc_ids)}
        self.faqs = list(faqs)

        self._postings = self._build_postings()
        if doc_embeddings is not None:
            self.doc_embeddings = _normalize_rows(np.asarray(doc_embeddings))
        else:
            texts = [f"{d.title}\n{d.body_markdown}" for d in self.documents]
            self.doc_embeddings = _normalize_rows(
                np.vstack([v.values for v in embedding_provider.embed(texts)])
            )
        if faq_embeddings is not None:
            self.faq_embeddings = _normalize_rows(np.asarray(faq_embeddings))
        elif self.faqs:
            faq_vectors = embedding_provider.embed([f.question for f in self.faqs])
            self.faq_embeddings = _normalize_rows(
                np.vstack([v.values for v in faq_vectors])
            )
        else:
            self.faq_embeddings = np.zeros((0, self.doc_embeddings.shape[1]))
        for faq, row in zip(self.faqs, self.faq_embeddings):
            faq.question_embedding = row
        self.faq_doc_ids = {d for f in self.faqs for d in f.doc_ids}
        self._embedder = embedding_provider

    # retrieval strategies need query embeddings from the same provider
    def embed_query(self, text: str) -> np.ndarray:
        vec = self._embedder.embed([text])[0].values
        norm = np.linalg.norm(vec)
        return vec / norm if norm else vec

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def n_faqs(self) -> int:
        return len(self.faqs)

    def document(self, doc_id: str) -> Document:
        return self.documents[self.doc_pos[doc_id]]

    def _build_postings(self) -> _Postings:
        term_docs: dict[str, list[tuple[int, int]]] = {}
        doc_len = np.zeros(self.n_docs, dtype=np.float64)
        for i, doc in enumerate(self.documents):
            tokens = tokenize_lower(doc.body_markdown)
            doc_len[i] = len(tokens)
            for term, freq in Counter(tokens).items():
                term_docs.setdefault(term, []).append((i, freq))
        n = self.n_docs
        vocab = {term: t for t, term in enumerate(sorted(term_docs))}
        offsets = np.zeros(len(vocab) + 1, dtype=np.int64)
        doc_idx_parts, tf_parts, idf = [], [], np.zeros(len(vocab))
        for term, t in vocab.items():
            postings = term_docs[term]
            offsets[t + 1] = offsets[t] + len(postings)
            doc_idx_parts.extend(p for p, _ in postings)
            tf_parts.extend(f for _, f in postings)
            df = len(postings)
            idf[t] = math.log((n - df + 0.5) / (df + 0.5) + 1.0)
        return _Postings(
            vocab=vocab,
            offsets=offsets,
            doc_idx=np.asarray(doc_idx_parts, dtype=np.int64),
            tf=np.asarray(tf_parts, dtype=np.float64),
            idf=idf,
            doc_len=doc_len,
            avgdl=float(doc_len.mean()) if n else 0.0,
        )

    @property
    def postings(self) -> _Postings:
        return self._postings


def load_faq_file(path: str | Path) -> list[FaqEntry]:
    """FAQ file: JSON array of {id, question, doc_ids[]}."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return [FaqEntry(id=e["id"], question=e["question"], doc_ids=list(e["doc_ids"]))
            for e in raw]


def save_index(index: RetrievalIndex, out_dir: str | Path, corpus_dir: str | Path):
    """Persist precomputed embeddings plus the FAQ table next to a pointer
    to the corpus store, so serving never re-embeds documents."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    np.savez(out_dir / "embeddings.npz",
             doc=index.doc_embeddings, faq=index.faq_embeddings)
    meta = {
        "schema_version": 1,
        "corpus_dir": str(Path(corpus_dir).resolve()),
        "doc_ids": index.doc_ids,
        "faqs": [{"id": f.id, "question": f.question, "doc_ids": f.doc_ids}
                 for f in index.faqs],
    }
    (out_dir / "index.json").write_text(
        json.dumps(meta, indent=2, ensure_ascii=False), encoding="utf-8")


def load_index(index_dir: str | Path, embedding_provider) -> RetrievalIndex:
    from ..ingest.corpus import load_manifest  # local import avoids a cycle

    index_dir = Path(index_dir)
    meta = json.loads((index_dir / "index.json").read_text(encoding="utf-8"))
    manifest = load_manifest(meta["corpus_dir"])
    faqs = [FaqEntry(id=f["id"], question=f["question"], doc_ids=list(f["doc_ids"]))
            for f in meta["faqs"]]
    arrays = np.load(index_dir / "embeddings.npz")
    return RetrievalIndex(manifest, faqs, embedding_provider,
                          doc_embeddings=arrays["doc"],
                          faq_embeddings=arrays["faq"])
