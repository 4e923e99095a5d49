"""Bounded breadth-first site crawler feeding the corpus builder."""

from __future__ import annotations

import logging
from collections import deque
from html.parser import HTMLParser
from urllib import robotparser
from urllib.parse import urljoin, urlsplit

import httpx

from ..errors import NetworkError, ZeroPagesFetched
from .corpus import canonical_url

logger = logging.getLogger(__name__)

USER_AGENT = "admitbot-crawler/0.1"


class _LinkCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.hrefs: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            href = dict(attrs).get("href")
            if href and not href.startswith(("#", "mailto:", "javascript:")):
                self.hrefs.append(href)


def extract_links(html: str, base_url: str) -> list[str]:
    collector = _LinkCollector()
    try:
        collector.feed(html)
        collector.close()
    except Exception:
        pass
    return [canonical_url(urljoin(base_url, h)) for h in collector.hrefs]


def _default_fetch(url: str, timeout: float = 20.0) -> str:
    resp = httpx.get(url, timeout=timeout, follow_redirects=True,
                     headers={"User-Agent": USER_AGENT})
    resp.raise_for_status()
    return resp.text


class _RobotsCache:
    def __init__(self, fetch):
        self._fetch = fetch
        self._parsers: dict[str, robotparser.RobotFileParser | None] = {}

    def allowed(self, url: str) -> bool:
        host = urlsplit(url).netloc
        if host not in self._parsers:
            parser = robotparser.RobotFileParser()
            robots_url = urlsplit(url)._replace(path="/robots.txt", query="").geturl()
            try:
                parser.parse(self._fetch(robots_url).splitlines())
                self._parsers[host] = parser
            except Exception:
                self._parsers[host] = None  # unreadable robots: allow
        parser = self._parsers[host]
        return parser is None or parser.can_fetch(USER_AGENT, url)


def fetch_site(seed_urls: list[str], same_host_only: bool = True,
               max_pages: int = 100, fetch=None, respect_robots: bool = True
               ) -> tuple[list[tuple[str, str]], list[NetworkError]]:
    """Breadth-first crawl from the seeds, bounded by max_pages.

    Pages are deduplicated by canonical URL. Per-page fetch failures are
    collected and returned; only a fully empty crawl is fatal. The fetch
    callable (url -> html) is injectable for tests.
    """
    if not seed_urls:
        raise ValueError("seed_urls must be non-empty")
    fetch = fetch or _default_fetch
    robots = _RobotsCache(fetch) if respect_robots else None
    seed_hosts = {urlsplit(u).netloc.lower() for u in seed_urls}

    queue = deque(canonical_url(u) for u in seed_urls)
    visited: set[str] = set()
    pages: list[tuple[str, str]] = []
    errors: list[NetworkError] = []

    while queue and len(pages) < max_pages:
        url = queue.popleft()
        if url in visited:
            continue
        visited.add(url)
        if robots and not robots.allowed(url):
            logger.info("robots.txt disallows %s", url)
            continue
        try:
            html = fetch(url)
        except Exception as exc:
            err = NetworkError(url, str(exc))
            logger.warning("fetch failed: %s", err)
            errors.append(err)
            continue
        pages.append((url, html))
        for link in extract_links(html, url):
            if link in visited:
                continue
            if same_host_only and urlsplit(link).netloc.lower() not in seed_hosts:
                continue
            if urlsplit(link).scheme not in ("http", "https", "file"):
                continue
            queue.append(link)

    if not pages:
        raise ZeroPagesFetched(f"no pages fetched from seeds {seed_urls}")
    return pages, errors
