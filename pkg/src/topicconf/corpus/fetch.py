"""Retrieval of raw article text from the Guardian content API.

Articles are written verbatim (the API's ``bodyText`` field) to
``<out_dir>/<safe id>.txt``. No cleaning is applied; removing leftover
markup or author names from bodies is a separate curation step.

The URL list holds one article URL or API id per line. Blank lines and
``#`` comments are skipped. A line may carry tab-separated ``author`` and
``topic`` columns after the URL; :func:`assemble_corpus` uses them to build
a labelled corpus from the fetched files.
"""

from __future__ import annotations

import logging
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable
from urllib.parse import urlparse

import httpx

from topicconf.corpus.model import Corpus, Document

log = logging.getLogger(__name__)

API_BASE = "https://content.guardianapis.com"
API_KEY_ENV = "GUARDIAN_API_KEY"


class FetchAuthError(RuntimeError):
    """The API rejected the key (HTTP 401/403)."""


@dataclass(frozen=True)
class UrlEntry:
    article_id: str
    author: str | None = None
    topic: str | None = None


@dataclass(frozen=True)
class FetchItem:
    article_id: str
    status: str  # fetched | skipped | failed
    reason: str = ""


@dataclass
class FetchReport:
    items: list[FetchItem] = field(default_factory=list)

    @property
    def fetched(self) -> int:
        return sum(i.status == "fetched" for i in self.items)

    @property
    def failed(self) -> int:
        return sum(i.status == "failed" for i in self.items)

    @property
    def skipped(self) -> int:
        return sum(i.status == "skipped" for i in self.items)

    def failures(self) -> list[FetchItem]:
        return [i for i in self.items if i.status == "failed"]

    def as_dict(self) -> dict:
        return {
            "fetched": self.fetched,
            "failed": self.failed,
            "skipped": self.skipped,
            "failures": [{"id": i.article_id, "reason": i.reason} for i in self.failures()],
        }


def article_id_from(url_or_id: str) -> str:
    """``https://www.theguardian.com/politics/2010/x`` -> ``politics/2010/x``."""
    url_or_id = url_or_id.strip()
    if "://" in url_or_id:
        url_or_id = urlparse(url_or_id).path
    return url_or_id.strip("/")


def safe_filename(article_id: str) -> str:
    return article_id.replace("/", "__") + ".txt"


def read_url_list(path: str | Path) -> list[UrlEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cols = [c.strip() for c in line.split("\t")]
            entries.append(
                UrlEntry(
                    article_id_from(cols[0]),
                    cols[1] if len(cols) > 1 and cols[1] else None,
                    cols[2] if len(cols) > 2 and cols[2] else None,
                )
            )
    return entries


def request_url(article_id: str) -> str:
    return f"{API_BASE}/{article_id}"


def _write_atomic(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".partial-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


class GuardianClient:
    """Fetches one article body, retrying rate-limited requests with backoff."""

    def __init__(
        self,
        api_key: str,
        client: httpx.Client | None = None,
        max_retries: int = 5,
        backoff: float = 1.0,
        max_backoff: float = 60.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if not api_key:
            raise ValueError("an API key is required")
        self.api_key = api_key
        self.client = client or httpx.Client(timeout=30.0)
        self.max_retries = max_retries
        self.backoff = backoff
        self.max_backoff = max_backoff
        self.sleep = sleep

    def fetch(self, article_id: str) -> str:
        """Return the article body, or raise ``LookupError`` with a reason."""
        params = {"api-key": self.api_key, "show-fields": "bodyText"}
        for attempt in range(self.max_retries + 1):
            try:
                resp = self.client.get(request_url(article_id), params=params)
            except httpx.HTTPError as exc:
                raise LookupError(f"network error: {exc}") from None
            if resp.status_code in (401, 403):
                raise FetchAuthError(f"API rejected the key (HTTP {resp.status_code})")
            if resp.status_code == 429:
                if attempt == self.max_retries:
                    raise LookupError(f"rate limited after {self.max_retries} retries")
                delay = min(self.backoff * 2**attempt, self.max_backoff)
                log.info("rate limited on %s, retrying in %.1fs", article_id, delay)
                self.sleep(delay)
                continue
            if resp.status_code == 404:
                raise LookupError("not found")
            if resp.status_code != 200:
                raise LookupError(f"HTTP {resp.status_code}")
            try:
                content = resp.json()["response"]["content"]
                return content["fields"]["bodyText"]
            except (ValueError, KeyError, TypeError):
                raise LookupError("malformed API response") from None
        raise AssertionError("unreachable")


def fetch_articles(
    url_list: str | Path,
    api_key: str,
    out_dir: str | Path,
    jobs: int = 4,
    client: GuardianClient | None = None,
) -> FetchReport:
    """Fetch every article in ``url_list`` into ``out_dir``.

    Already-present files are skipped. Per-article failures are recorded
    in the report; an authentication error aborts the whole run.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = read_url_list(url_list)
    client = client or GuardianClient(api_key)

    def work(entry: UrlEntry) -> FetchItem:
        target = out_dir / safe_filename(entry.article_id)
        if target.exists():
            return FetchItem(entry.article_id, "skipped")
        try:
            body = client.fetch(entry.article_id)
        except LookupError as exc:
            return FetchItem(entry.article_id, "failed", str(exc))
        _write_atomic(target, body)
        return FetchItem(entry.article_id, "fetched")

    pool = ThreadPoolExecutor(max_workers=max(1, jobs))
    try:
        items = list(pool.map(work, entries))
    except FetchAuthError:
        pool.shutdown(wait=True, cancel_futures=True)
        raise
    pool.shutdown()
    return FetchReport(items)


def planned_requests(url_list: str | Path) -> list[str]:
    return [request_url(e.article_id) for e in read_url_list(url_list)]


def assemble_corpus(url_list: str | Path, out_dir: str | Path) -> Corpus:
    """Build a corpus from fetched files using the list's author/topic columns."""
    out_dir = Path(out_dir)
    docs = []
    for entry in read_url_list(url_list):
        if entry.author is None or entry.topic is None:
            raise ValueError(f"{entry.article_id}: URL list line lacks author/topic columns")
        path = out_dir / safe_filename(entry.article_id)
        if not path.exists():
            log.warning("skipping %s: not fetched", entry.article_id)
            continue
        docs.append(Document(entry.article_id, entry.author, entry.topic, path.read_text(encoding="utf-8")))
    return Corpus(tuple(docs))
