"""Document store: one Markdown file per page plus a JSON manifest.

Layout under the store directory:

    manifest.json            current manifest (atomic os.replace on publish)
    builds/<build_id>/*.md   document bodies, content-addressed per build

A rebuild writes a fresh build directory and swaps the manifest last, so a
reader holding the previous manifest can keep reading every previous
document during and after the rebuild. Identical input produces an
identical build_id and a byte-identical store.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import urlsplit, urlunsplit

from ..errors import DuplicateUrl, EmptyDocument, StorageFailure
from ..tokenize import count_tokens
from .html2md import convert_html, link_markers


@dataclass
class Document:
    id: str
    source_url: str
    title: str
    body_markdown: str
    links: dict[str, str] = field(default_factory=dict)
    token_count: int = 0
    fetched_at: str = ""  # UTC ISO-8601

    def validate(self):
        markers = link_markers(self.body_markdown)
        if sorted(set(markers)) != sorted(self.links.keys()) or len(set(markers)) != len(markers):
            raise ValueError(
                f"document {self.id}: link markers {markers} do not match "
                f"link table {sorted(self.links)}"
            )
        actual = count_tokens(self.body_markdown)
        if actual != self.token_count:
            raise ValueError(
                f"document {self.id}: token_count {self.token_count} != {actual}"
            )

    def meta(self) -> dict:
        return {
            "id": self.id,
            "source_url": self.source_url,
            "title": self.title,
            "links": self.links,
            "token_count": self.token_count,
            "fetched_at": self.fetched_at,
        }


@dataclass
class CorpusManifest:
    documents: list[Document]
    page_count: int
    mean_token_length: float
    build_id: str = ""

    def doc_by_id(self, doc_id: str) -> Document:
        for d in self.documents:
            if d.id == doc_id:
                return d
        raise KeyError(doc_id)


def canonical_url(url: str) -> str:
    parts = urlsplit(url)
    return urlunsplit((parts.scheme, parts.netloc.lower(), parts.path, parts.query, ""))


def slugify_url(url: str) -> str:
    parts = urlsplit(url)
    raw = f"{parts.netloc}{parts.path}"
    slug = re.sub(r"[^a-z0-9]+", "-", raw.lower()).strip("-")
    return slug or "index"


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def make_document(html: str, source_url: str, fetched_at: str | None = None,
                  doc_id: str | None = None) -> Document:
    page = convert_html(html, source_url)
    body = page.body_markdown
    return Document(
        id=doc_id or slugify_url(source_url),
        source_url=source_url,
        title=page.title or slugify_url(source_url),
        body_markdown=body,
        links=page.links,
        token_count=count_tokens(body),
        fetched_at=fetched_at or _utc_now(),
    )


def build_corpus(pages: list[tuple[str, str]], out_dir: str | Path | None = None,
                 fetched_at: str | None = None) -> CorpusManifest:
    """Build (and optionally persist) the knowledge base from (url, html) pages.

    Pass a fixed fetched_at for reproducible, byte-identical rebuilds;
    otherwise the current UTC time is stamped on every document.
    """
    if not pages:
        raise ValueError("page list must be non-empty")
    seen: set[str] = set()
    for url, _ in pages:
        canon = canonical_url(url)
        if canon in seen:
            raise DuplicateUrl(canon)
        seen.add(canon)

    stamp = fetched_at or _utc_now()
    documents: list[Document] = []
    used_ids: set[str] = set()
    for url, html in pages:
        base = slugify_url(url)
        doc_id, n = base, 2
        while doc_id in used_ids:
            doc_id, n = f"{base}-{n}", n + 1
        try:
            doc = make_document(html, url, fetched_at=stamp, doc_id=doc_id)
        except EmptyDocument:
            continue
        used_ids.add(doc_id)
        doc.validate()
        documents.append(doc)
    if not documents:
        raise EmptyDocument("every input page was empty after extraction")

    manifest = CorpusManifest(
        documents=documents,
        page_count=len(documents),
        mean_token_length=sum(d.token_count for d in documents) / len(documents),
    )
    manifest.build_id = _build_id(manifest)
    if out_dir is not None:
        write_store(manifest, Path(out_dir))
    return manifest


def _build_id(manifest: CorpusManifest) -> str:
    payload = json.dumps(
        [[d.meta(), d.body_markdown] for d in manifest.documents],
        sort_keys=True, ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _manifest_json(manifest: CorpusManifest) -> str:
    return json.dumps(
        {
            "schema_version": 1,
            "build_id": manifest.build_id,
            "page_count": manifest.page_count,
            "mean_token_length": manifest.mean_token_length,
            "documents": [d.meta() for d in manifest.documents],
        },
        indent=2, ensure_ascii=False, sort_keys=True,
    ) + "\n"


def write_store(manifest: CorpusManifest, out_dir: Path):
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        build_dir = out_dir / "builds" / manifest.build_id
        if not build_dir.exists():
            tmp_dir = Path(tempfile.mkdtemp(dir=out_dir, prefix=".build-"))
            for doc in manifest.documents:
                (tmp_dir / f"{doc.id}.md").write_text(doc.body_markdown, encoding="utf-8")
            build_dir.parent.mkdir(exist_ok=True)
            try:
                os.replace(tmp_dir, build_dir)
            except OSError:
                # concurrent writer published the same build first
                if not build_dir.exists():
                    raise
        fd, tmp_manifest = tempfile.mkstemp(dir=out_dir, suffix=".json")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(_manifest_json(manifest))
        os.replace(tmp_manifest, out_dir / "manifest.json")
    except OSError as exc:
        raise StorageFailure(str(exc)) from exc


def load_manifest(store_dir: str | Path) -> CorpusManifest:
    store_dir = Path(store_dir)
    raw = json.loads((store_dir / "manifest.json").read_text(encoding="utf-8"))
    build_dir = store_dir / "builds" / raw["build_id"]
    documents = []
    for meta in raw["documents"]:
        body = (build_dir / f"{meta['id']}.md").read_text(encoding="utf-8")
        documents.append(Document(body_markdown=body, **meta))
    return CorpusManifest(
        documents=documents,
        page_count=raw["page_count"],
        mean_token_length=raw["mean_token_length"],
        build_id=raw["build_id"],
    )
