"""Shared fixtures and small builders used across the test modules."""

from pathlib import Path

import pytest

from cardaudit.builtin import builtin_framework
from cardaudit.judge import AgentVerdict, CompletenessLabel
from cardaudit.retrieve import EvidenceBundle, EvidenceChunk, ModelIdentity, Query

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
CARD_DIR = FIXTURES / "cards"
DEMO_CORPUS = FIXTURES / "demo_corpus"
NAME_LIST = FIXTURES / "section_names.txt"

TS = "2026-01-01T00:00:00Z"


@pytest.fixture(scope="session")
def framework():
    return builtin_framework()


@pytest.fixture
def model():
    return ModelIdentity(model_id="test-model", display_name="Test Model", provider="Test Lab")


def make_chunk(rank: int, snippet: str = "snippet text", url: str = "") -> EvidenceChunk:
    return EvidenceChunk(
        source_url=url or f"https://example.test/doc{rank}",
        title=f"doc {rank}",
        snippet=snippet,
        rank=rank,
        retrieved_at=TS,
    )


def make_query(sub_id: str = "s.a", keywords: tuple[str, ...] = ("alpha",)) -> Query:
    ident = ModelIdentity(model_id="m", display_name="M", provider="P")
    return Query(model=ident, subsection_id=sub_id, query_text=f'"M" {sub_id}', keywords=keywords)


def make_bundle(
    sub_id: str = "s.a",
    snippets: tuple[str, ...] = ("snippet",),
    keywords: tuple[str, ...] = ("alpha",),
    failed: bool = False,
) -> EvidenceBundle:
    chunks = tuple(make_chunk(i + 1, text) for i, text in enumerate(snippets))
    return EvidenceBundle(
        subsection_id=sub_id,
        query=make_query(sub_id, keywords),
        chunks=chunks,
        backend_id="test",
        failed=failed,
        error="fetch failed" if failed else "",
    )


def verdict(agent_id: str, label: CompletenessLabel | None, ranks: tuple[int, ...] = ()) -> AgentVerdict:
    rationale = "" if label is None else f"{agent_id} saw enough"
    return AgentVerdict(agent_id=agent_id, label=label, rationale=rationale, cited_chunk_ranks=ranks)
