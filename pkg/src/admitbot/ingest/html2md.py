"""Lenient HTML to Markdown conversion.

Pre-processing is deliberately minimal: headings become ``#`` lines, list
items become ``-`` lines, every anchor is replaced by its text followed by
a numeric link marker ``[Ln]`` (n assigned in document order, starting at
1 per document), and script/style/nav/footer/header subtrees are dropped
as boilerplate. Documents are never split.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from urllib.parse import urljoin

from ..errors import EmptyDocument, MalformedInput

SKIP_TAGS = {"script", "style", "nav", "footer", "header", "head"}
BLOCK_TAGS = {
    "p", "div", "section", "article", "main", "aside", "ul", "ol", "table",
    "tr", "td", "th", "blockquote", "pre", "br", "hr", "form", "figure",
}
HEADING_TAGS = {f"h{i}": i for i in range(1, 7)}

LINK_MARKER_RE = re.compile(r"\[L\d+\]")


@dataclass
class ConvertedPage:
    title: str
    body_markdown: str
    links: dict[str, str] = field(default_factory=dict)


class _MarkdownExtractor(HTMLParser):
    def __init__(self, base_url: str):
        super().__init__(convert_charrefs=True)
        self.base_url = base_url
        self.blocks: list[str] = []
        self.inline: list[str] = []
        self.links: dict[str, str] = {}
        self.title = ""
        self._heading: int | None = None
        self._list_item = False
        self._skip_depth = 0
        self._in_title = False
        self._anchor_hrefs: list[str | None] = []

    # -- helpers -----------------------------------------------------------

    def _flush(self):
        text = " ".join(p for p in self.inline if p)
        self.inline = []
        if not text:
            self._heading = None
            self._list_item = False
            return
        if self._heading:
            text = "#" * self._heading + " " + text
            if not self.title:
                self.title = text.lstrip("# ")
        elif self._list_item:
            text = "- " + text
        self.blocks.append(text)
        self._heading = None
        self._list_item = False

    def _add_text(self, text: str):
        # neutralize literal [Ln] sequences so link markers stay unambiguous
        text = LINK_MARKER_RE.sub(lambda m: m.group(0)[1:-1], text)
        chunk = " ".join(text.split())
        if chunk:
            self.inline.append(chunk)

    # -- parser callbacks --------------------------------------------------

    def handle_starttag(self, tag, attrs):
        if self._skip_depth:
            if tag in SKIP_TAGS:
                self._skip_depth += 1
            return
        if tag in SKIP_TAGS:
            self._skip_depth = 1
            return
        if tag == "title":
            self._in_title = True
        elif tag in HEADING_TAGS:
            self._flush()
            self._heading = HEADING_TAGS[tag]
        elif tag == "li":
            self._flush()
            self._list_item = True
        elif tag in BLOCK_TAGS:
            self._flush()
        elif tag == "a":
            href = dict(attrs).get("href")
            self._anchor_hrefs.append(href)

    def handle_endtag(self, tag):
        if self._skip_depth:
            if tag in SKIP_TAGS:
                self._skip_depth -= 1
            return
        if tag == "title":
            self._in_title = False
        elif tag in HEADING_TAGS or tag == "li" or tag in BLOCK_TAGS:
            self._flush()
        elif tag == "a" and self._anchor_hrefs:
            href = self._anchor_hrefs.pop()
            if href and not href.startswith(("#", "javascript:")):
                marker = f"L{len(self.links) + 1}"
                self.links[marker] = urljoin(self.base_url, href)
                self.inline.append(f"[{marker}]")

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            title = " ".join(data.split())
            if title and not self.title:
                self.title = title
            return
        self._add_text(data)

    def finish(self) -> ConvertedPage:
        self._flush()
        return ConvertedPage(
            title=self.title,
            body_markdown="\n\n".join(self.blocks),
            links=self.links,
        )


def convert_html(html: str, source_url: str) -> ConvertedPage:
    """Convert one HTML page; raises EmptyDocument / MalformedInput."""
    if not isinstance(html, str):
        raise MalformedInput("expected HTML text")
    extractor = _MarkdownExtractor(source_url)
    try:
        extractor.feed(html)
        extractor.close()
    except Exception as exc:  # html.parser rarely throws, but stay lenient
        raise MalformedInput(str(exc)) from exc
    page = extractor.finish()
    if not page.body_markdown.strip():
        raise EmptyDocument(f"no textual content in {source_url}")
    return page


def link_markers(body_markdown: str) -> list[str]:
    """All [Ln] markers present in a Markdown body, in order."""
    return [m[1:-1] for m in LINK_MARKER_RE.findall(body_markdown)]
