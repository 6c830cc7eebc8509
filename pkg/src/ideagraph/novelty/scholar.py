"""Scholarly search client (Semantic Scholar Graph API wire shape).

GET {base}/paper/search?query=...&limit=...&fields=title,abstract
returns {"data": [{"paperId": ..., "title": ..., "abstract": ...}, ...]}.
Public-endpoint etiquette: a shared rate limiter enforces a minimum gap
between requests; 429/5xx responses are retried with backoff.
"""

from __future__ import annotations

import logging
import os
import threading
import time
from typing import Optional, Protocol, Sequence

import requests

from ..errors import ArgumentError, ProtocolError, SearchUnavailableError
from .types import MAX_HITS, PaperRecord

logger = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.semanticscholar.org/graph/v1"
API_KEY_ENV = "SEMANTIC_SCHOLAR_API_KEY"


class SearchBackend(Protocol):
    def search(self, query: str, limit: int = MAX_HITS) -> list[PaperRecord]: ...


class RateLimiter:
    """Minimum wall-clock gap between consecutive acquisitions."""

    def __init__(self, min_interval: float = 1.1):
        self.min_interval = min_interval
        self._last = 0.0
        self._lock = threading.Lock()

    def wait(self):
        if self.min_interval <= 0:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._last + self.min_interval - now
            if delay > 0:
                time.sleep(delay)
            self._last = time.monotonic()


class SemanticScholarClient:
    """HTTP search client; retries transient failures, caps hit lists."""

    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        timeout: float = 20.0,
        max_attempts: int = 3,
        backoff_base: float = 0.5,
        rate_limiter: Optional[RateLimiter] = None,
        session: Optional[requests.Session] = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.max_attempts = max(1, max_attempts)
        self.backoff_base = backoff_base
        self.rate_limiter = rate_limiter or RateLimiter()
        self.session = session or requests.Session()

    def _headers(self) -> dict[str, str]:
        headers = {}
        key = os.environ.get(API_KEY_ENV, "")
        if key:
            headers["x-api-key"] = key
        return headers

    def search(self, query: str, limit: int = MAX_HITS) -> list[PaperRecord]:
        query = query.strip()
        if not query:
            raise ArgumentError("query must be non-empty")
        limit = max(1, min(int(limit), MAX_HITS))
        params = {"query": query, "limit": limit, "fields": "title,abstract"}
        url = f"{self.base_url}/paper/search"

        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            self.rate_limiter.wait()
            try:
                resp = self.session.get(url, params=params, headers=self._headers(), timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                logger.warning("search request failed (attempt %d): %s", attempt + 1, exc)
                continue
            if resp.status_code in (429, 500, 502, 503, 504):
                last_error = SearchUnavailableError(f"status {resp.status_code}")
                logger.warning("search returned %d (attempt %d)", resp.status_code, attempt + 1)
                continue
            if resp.status_code != 200:
                raise ProtocolError(f"search returned status {resp.status_code}", resp.text[:2000])
            return _parse_search_body(resp, limit)
        raise SearchUnavailableError(
            f"search unavailable after {self.max_attempts} attempts: {last_error}"
        )


def _parse_search_body(resp: requests.Response, limit: int) -> list[PaperRecord]:
    try:
        body = resp.json()
        rows: Sequence[dict] = body.get("data", [])
        records = []
        for row in rows[:limit]:
            title = (row.get("title") or "").strip()
            if not title:
                continue
            records.append(
                PaperRecord(
                    title=title,
                    abstract=row.get("abstract"),
                    external_id=str(row.get("paperId", "")),
                )
            )
        return records
    except (ValueError, AttributeError, TypeError) as exc:
        raise ProtocolError(f"malformed search body: {exc}", resp.text[:2000]) from exc


class StaticSearchBackend:
    """In-memory stand-in returning preset records for any query; offline runs."""

    def __init__(self, records: Sequence[PaperRecord] = ()):
        self.records = list(records)
        self.queries: list[str] = []

    def search(self, query: str, limit: int = MAX_HITS) -> list[PaperRecord]:
        if not query.strip():
            raise ArgumentError("query must be non-empty")
        self.queries.append(query)
        return self.records[: max(1, min(int(limit), MAX_HITS))]
