"""Evidence retrieval: one query per rubric field, pluggable backends.

Two backends ship. CorpusBackend greps a local directory of markdown
documents and never touches the network; it is the deterministic path
used by tests and offline runs. LiveSearchBackend POSTs to a search API
with bearer auth, client-side rate limiting and bounded retries.

Retrieved bundles can be cached on disk keyed by (backend, query hash),
so re-running a model is cheap and offline reruns are byte-stable.
"""

from __future__ import annotations

import json
import os
import random
import re
import time
from bisect import bisect_left, bisect_right
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import httpx

from .cards import iter_card_paths
from .schema import Framework, Subsection
from .seeds import SUBSECTION_KEYWORDS
from .normalize import normalize_name
from .util import atomic_write_text, sha256_short, utc_timestamp

ENV_SEARCH_KEY = "CARDAUDIT_SEARCH_API_KEY"
ENV_SEARCH_URL = "CARDAUDIT_SEARCH_API_URL"
DEFAULT_SEARCH_URL = "https://api.cardaudit.invalid/v1/search"

_WINDOW = 600  # snippet size in characters
_STOPWORDS = frozenset({"the", "a", "an", "of", "and", "or", "in", "for", "to", "with", "on", "by"})


class RetrievalError(Exception):
    def __init__(self, message: str, *, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


class AuthenticationError(RetrievalError):
    def __init__(self, message: str):
        super().__init__(message, retryable=False)


class RetrievalRunError(Exception):
    """Every field of a run failed; there is nothing to judge."""


@dataclass(frozen=True, slots=True)
class ModelIdentity:
    model_id: str
    display_name: str
    provider: str
    version_label: str | None = None

    def to_dict(self) -> dict:
        d = {"model_id": self.model_id, "display_name": self.display_name, "provider": self.provider}
        if self.version_label is not None:
            d["version_label"] = self.version_label
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ModelIdentity":
        return cls(
            model_id=str(d["model_id"]),
            display_name=str(d.get("display_name", d["model_id"])),
            provider=str(d.get("provider", "")),
            version_label=d.get("version_label"),
        )


@dataclass(frozen=True, slots=True)
class Query:
    model: ModelIdentity
    subsection_id: str
    query_text: str
    keywords: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class EvidenceChunk:
    source_url: str
    title: str
    snippet: str
    rank: int
    retrieved_at: str


@dataclass(frozen=True, slots=True)
class EvidenceBundle:
    subsection_id: str
    query: Query
    chunks: tuple[EvidenceChunk, ...]
    backend_id: str
    failed: bool = False
    error: str = ""


@dataclass(frozen=True, slots=True)
class Limits:
    max_chunks: int = 8
    timeout: float = 10.0


def keywords_for(sub: Subsection) -> tuple[str, ...]:
    """Relevance keywords for a field; falls back to its title's words."""
    known = SUBSECTION_KEYWORDS.get(sub.id)
    if known:
        return tuple(known)
    tokens = [t for t in normalize_name(sub.title).split() if t not in _STOPWORDS]
    if not tokens:
        tokens = normalize_name(sub.title).split() or [sub.id]
    return tuple(tokens)


def build_query(model: ModelIdentity, sub: Subsection) -> Query:
    kws = keywords_for(sub)
    text = f'"{model.display_name}" {" ".join(kws)} (model card OR system card OR technical report)'
    return Query(model=model, subsection_id=sub.id, query_text=text, keywords=kws)


def generate_queries(model: ModelIdentity, framework: Framework) -> list[Query]:
    return [build_query(model, sub) for sub in framework.subsections()]


def query_hash(query_text: str) -> str:
    return sha256_short(query_text)


# ── corpus backend ───────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class _Doc:
    relpath: str
    title: str
    text: str


def _first_heading(text: str, fallback: str) -> str:
    for line in text.splitlines():
        m = re.match(r"#{1,6}[ \t]+(.+?)\s*$", line)
        if m:
            return m.group(1).strip().strip("#").strip() or fallback
    return fallback


def _best_window(text: str, keywords: tuple[str, ...]) -> tuple[int, int]:
    """(score, start) of the densest fixed-size window over keyword hits.

    Score counts keyword occurrences that fit entirely inside the window.
    Candidate windows are anchored at each hit; ties go to the earliest.
    A text with no hits scores 0.
    """
    lowered = text.lower()
    positions: dict[str, list[int]] = {}
    anchors: set[int] = set()
    for kw in keywords:
        k = kw.lower()
        if not k:
            continue
        hits = [m.start() for m in re.finditer(re.escape(k), lowered)]
        if hits:
            positions[k] = hits
            anchors.update(hits)
    if not anchors:
        return 0, 0
    best_score, best_start = 0, 0
    for a in sorted(anchors):
        score = 0
        for k, hits in positions.items():
            lo = bisect_left(hits, a)
            hi = bisect_right(hits, a + _WINDOW - len(k))
            score += max(0, hi - lo)
        if score > best_score:
            best_score, best_start = score, a
    return best_score, best_start


class CorpusBackend:
    """Searches markdown files under a local directory."""

    backend_id = "corpus"

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.call_count = 0
        self._docs: list[_Doc] | None = None

    def _load(self) -> list[_Doc]:
        if self._docs is None:
            docs = []
            for path in iter_card_paths(self.root):
                text = path.read_bytes().decode("utf-8", errors="replace")
                rel = path.relative_to(self.root).as_posix()
                docs.append(_Doc(rel, _first_heading(text, path.stem), text))
            self._docs = docs
        return self._docs

    def search(self, query: Query, limits: Limits) -> list[EvidenceChunk]:
        self.call_count += 1
        scored: list[tuple[int, str, str, str]] = []
        for doc in self._load():
            score, start = _best_window(doc.text, query.keywords)
            if score > 0:
                scored.append((score, doc.relpath, doc.title, doc.text[start : start + _WINDOW]))
        scored.sort(key=lambda t: (-t[0], t[1]))
        now = utc_timestamp()
        return [
            EvidenceChunk(source_url=rel, title=title, snippet=snippet, rank=i + 1, retrieved_at=now)
            for i, (_, rel, title, snippet) in enumerate(scored[: limits.max_chunks])
        ]


# ── live backend ─────────────────────────────────────────────────────────────


class TokenBucket:
    """Client-side rate limiter; clock and sleep injectable for tests."""

    def __init__(self, rate: float = 2.0, burst: int = 2, *, clock=time.monotonic, sleep=time.sleep):
        if rate <= 0:
            raise ValueError(f"rate must be positive, got {rate!r}")
        if burst < 1:
            raise ValueError(f"burst must be at least 1, got {burst!r}")
        self.rate = float(rate)
        self.burst = float(burst)
        self._clock = clock
        self._sleep = sleep
        self._tokens = float(burst)
        self._last = clock()

    def acquire(self) -> None:
        while True:
            now = self._clock()
            self._tokens = min(self.burst, self._tokens + (now - self._last) * self.rate)
            self._last = now
            if self._tokens >= 1.0:
                self._tokens -= 1.0
                return
            self._sleep((1.0 - self._tokens) / self.rate)


class LiveSearchBackend:
    """POSTs queries to a search API. Bearer auth, retries with backoff.

    429 and 5xx responses are retried up to three attempts total with
    exponential backoff plus jitter; 401/403 raise AuthenticationError
    immediately; other 4xx are treated as permanent.
    """

    backend_id = "live"

    def __init__(
        self,
        api_url: str | None = None,
        api_key: str | None = None,
        *,
        client: httpx.Client | None = None,
        rate: float = 2.0,
        burst: int = 2,
        sleep=time.sleep,
        clock=time.monotonic,
        rng: random.Random | None = None,
    ):
        self.api_url = api_url or os.environ.get(ENV_SEARCH_URL) or DEFAULT_SEARCH_URL
        key = api_key if api_key is not None else os.environ.get(ENV_SEARCH_KEY)
        if not key:
            raise AuthenticationError(f"no search API key; set {ENV_SEARCH_KEY}")
        self._key = key
        self._client = client or httpx.Client()
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._bucket = TokenBucket(rate=rate, burst=burst, clock=clock, sleep=sleep)
        self.http_calls = 0

    def _parse(self, data: object, limits: Limits) -> list[EvidenceChunk]:
        if not isinstance(data, dict) or not isinstance(data.get("results"), list):
            raise RetrievalError("malformed search response: missing results list")
        now = utc_timestamp()
        chunks = []
        for i, item in enumerate(data["results"][: limits.max_chunks]):
            if not isinstance(item, dict):
                raise RetrievalError("malformed search response: non-object result")
            chunks.append(
                EvidenceChunk(
                    source_url=str(item.get("url", "")),
                    title=str(item.get("title", "")),
                    snippet=str(item.get("snippet", "")),
                    rank=i + 1,
                    retrieved_at=now,
                )
            )
        return chunks

    def search(self, query: Query, limits: Limits) -> list[EvidenceChunk]:
        self._bucket.acquire()
        payload = {"query": query.query_text, "count": limits.max_chunks}
        headers = {"Authorization": f"Bearer {self._key}"}
        last_error = "no attempts made"
        for attempt in range(3):
            self.http_calls += 1
            try:
                resp = self._client.post(self.api_url, json=payload, headers=headers, timeout=limits.timeout)
            except httpx.HTTPError as exc:
                last_error = f"transport error: {exc}"
            else:
                if resp.status_code == 200:
                    try:
                        return self._parse(resp.json(), limits)
                    except json.JSONDecodeError as exc:
                        raise RetrievalError(f"search response is not JSON: {exc}") from exc
                if resp.status_code in (401, 403):
                    raise AuthenticationError(f"search API rejected credentials ({resp.status_code})")
                if resp.status_code == 429 or resp.status_code >= 500:
                    last_error = f"search API returned {resp.status_code}"
                else:
                    raise RetrievalError(f"search API returned {resp.status_code}")
            if attempt < 2:
                self._sleep(0.5 * (2**attempt) * (1.0 + self._rng.random()))
        raise RetrievalError(last_error, retryable=True)


# ── serialization (cache format) ─────────────────────────────────────────────


def query_to_dict(q: Query) -> dict:
    return {
        "model": q.model.to_dict(),
        "subsection_id": q.subsection_id,
        "query_text": q.query_text,
        "keywords": list(q.keywords),
    }


def query_from_dict(d: dict) -> Query:
    return Query(
        model=ModelIdentity.from_dict(d["model"]),
        subsection_id=str(d["subsection_id"]),
        query_text=str(d["query_text"]),
        keywords=tuple(str(k) for k in d.get("keywords", [])),
    )


def chunk_to_dict(c: EvidenceChunk) -> dict:
    return {
        "source_url": c.source_url,
        "title": c.title,
        "snippet": c.snippet,
        "rank": c.rank,
        "retrieved_at": c.retrieved_at,
    }


def chunk_from_dict(d: dict) -> EvidenceChunk:
    return EvidenceChunk(
        source_url=str(d["source_url"]),
        title=str(d.get("title", "")),
        snippet=str(d.get("snippet", "")),
        rank=int(d["rank"]),
        retrieved_at=str(d.get("retrieved_at", "")),
    )


def bundle_to_dict(b: EvidenceBundle) -> dict:
    return {
        "subsection_id": b.subsection_id,
        "query": query_to_dict(b.query),
        "chunks": [chunk_to_dict(c) for c in b.chunks],
        "backend_id": b.backend_id,
        "failed": b.failed,
        "error": b.error,
    }


def bundle_from_dict(d: dict) -> EvidenceBundle:
    return EvidenceBundle(
        subsection_id=str(d["subsection_id"]),
        query=query_from_dict(d["query"]),
        chunks=tuple(chunk_from_dict(c) for c in d["chunks"]),
        backend_id=str(d["backend_id"]),
        failed=bool(d.get("failed", False)),
        error=str(d.get("error", "")),
    )


class BundleCache:
    """Disk cache: cache/<model_id>/<subsection_id>.json.

    An entry only counts as a hit when both the backend id and the query
    hash match; anything unreadable is treated as a miss.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _path(self, model_id: str, subsection_id: str) -> Path:
        return self.root / model_id / f"{subsection_id}.json"

    def get(self, model_id: str, subsection_id: str, backend_id: str, qhash: str) -> EvidenceBundle | None:
        path = self._path(model_id, subsection_id)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            if data.get("backend_id") != backend_id or data.get("query_hash") != qhash:
                raise KeyError("stale")
            bundle = bundle_from_dict(data["bundle"])
        except (OSError, ValueError, KeyError, TypeError):
            self.misses += 1
            return None
        self.hits += 1
        return bundle

    def put(self, model_id: str, bundle: EvidenceBundle, qhash: str) -> None:
        payload = {"backend_id": bundle.backend_id, "query_hash": qhash, "bundle": bundle_to_dict(bundle)}
        atomic_write_text(self._path(model_id, bundle.subsection_id), json.dumps(payload, indent=2) + "\n")


# ── orchestration ────────────────────────────────────────────────────────────


def retrieve_evidence(backend, query: Query, limits: Limits, cache: BundleCache | None = None) -> EvidenceBundle:
    """Fetch one field's evidence, via cache when possible."""
    qhash = query_hash(query.query_text)
    if cache is not None:
        cached = cache.get(query.model.model_id, query.subsection_id, backend.backend_id, qhash)
        if cached is not None:
            return cached
    chunks = backend.search(query, limits)
    if [c.rank for c in chunks] != list(range(1, len(chunks) + 1)):
        raise RetrievalError(f"backend returned non-contiguous ranks for {query.subsection_id}")
    if len(chunks) > limits.max_chunks:
        chunks = chunks[: limits.max_chunks]
    bundle = EvidenceBundle(
        subsection_id=query.subsection_id,
        query=query,
        chunks=tuple(chunks),
        backend_id=backend.backend_id,
    )
    if cache is not None:
        cache.put(query.model.model_id, bundle, qhash)
    return bundle


def retrieve_all(
    backend,
    model: ModelIdentity,
    framework: Framework,
    limits: Limits = Limits(),
    cache: BundleCache | None = None,
    parallelism: int = 4,
) -> dict[str, EvidenceBundle]:
    """Retrieve evidence for every field of the rubric.

    Individual failures degrade to a failed bundle so one flaky query
    cannot sink the run; if every field fails, the run itself fails.
    """
    queries = generate_queries(model, framework)

    def one(q: Query) -> EvidenceBundle:
        try:
            return retrieve_evidence(backend, q, limits, cache)
        except RetrievalError as exc:
            return EvidenceBundle(
                subsection_id=q.subsection_id,
                query=q,
                chunks=(),
                backend_id=backend.backend_id,
                failed=True,
                error=str(exc),
            )

    workers = max(1, parallelism)
    if workers == 1:
        bundles = [one(q) for q in queries]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            bundles = list(pool.map(one, queries))
    out = {b.subsection_id: b for b in bundles}
    if bundles and all(b.failed for b in bundles):
        first = bundles[0].error or "unknown error"
        raise RetrievalRunError(f"evidence retrieval failed for all {len(bundles)} fields: {first}")
    return out
