from .corpus import CorpusManifest, Document, build_corpus, load_manifest
from .crawl import fetch_site
from .html2md import convert_html

__all__ = [
    "Document",
    "CorpusManifest",
    "convert_html",
    "build_corpus",
    "load_manifest",
    "fetch_site",
]
