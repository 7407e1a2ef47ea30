"""Completeness judging: a panel of agents votes on each rubric field.

Every agent returns Absent / Mentioned / Detailed (or abstains) after
reading the retrieved evidence. The panel verdicts are folded into one
label by taking the lower median of the ordinals, which equals the
majority label whenever a strict majority exists and otherwise breaks
ties toward the more conservative grade.
"""

from __future__ import annotations

import json
import os
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Sequence

import httpx

from .retrieve import EvidenceBundle
from .schema import Framework, Subsection

ENV_LLM_KEY = "CARDAUDIT_LLM_API_KEY"
ENV_LLM_URL = "CARDAUDIT_LLM_API_URL"
DEFAULT_LLM_URL = "https://api.cardaudit.invalid/v1/chat/completions"


class JudgingError(Exception):
    """A field could not be judged."""


class JudgeTransportError(JudgingError):
    """The grading API could not be reached or returned garbage."""


class AgentSpecError(ValueError):
    """An agent spec string on the command line is malformed."""


class CompletenessLabel(IntEnum):
    ABSENT = 0
    MENTIONED = 1
    DETAILED = 2

    @property
    def display(self) -> str:
        return _DISPLAY[self]

    @classmethod
    def parse(cls, text: str) -> "CompletenessLabel":
        try:
            return _BY_DISPLAY[text]
        except KeyError:
            raise ValueError(f"unknown completeness label {text!r}") from None


_DISPLAY = {
    CompletenessLabel.ABSENT: "Absent",
    CompletenessLabel.MENTIONED: "Mentioned",
    CompletenessLabel.DETAILED: "Detailed",
}
_BY_DISPLAY = {v: k for k, v in _DISPLAY.items()}

# digits, percent signs, or shouty acronyms (GPU, MMLU, ...)
_METRIC_RE = re.compile(r"\d|%|\b[A-Z][A-Z0-9]{2,}\b")


@dataclass(frozen=True, slots=True)
class AgentVerdict:
    agent_id: str
    label: CompletenessLabel | None
    rationale: str = ""
    cited_chunk_ranks: tuple[int, ...] = ()

    @property
    def abstained(self) -> bool:
        return self.label is None


@dataclass(frozen=True, slots=True)
class ConsensusResult:
    subsection_id: str
    label: CompletenessLabel
    verdicts: tuple[AgentVerdict, ...]
    unanimous: bool
    tie_broken: bool
    unscorable: bool = False
    note: str = ""
    evidence_sources: tuple[str, ...] = ()


def depth_of(text: str, *, min_detail_chars: int = 400, require_metric: bool = True) -> CompletenessLabel:
    """Depth grade for text already known to cover a field.

    Detailed needs enough text and (by default) at least one metric-like
    token; everything else is Mentioned.
    """
    if len(text) >= min_detail_chars and (not require_metric or _METRIC_RE.search(text)):
        return CompletenessLabel.DETAILED
    return CompletenessLabel.MENTIONED


def classify_text(
    text: str,
    keywords: Sequence[str],
    *,
    min_detail_chars: int = 400,
    require_metric: bool = True,
) -> CompletenessLabel:
    """Grade a single block of text against a field's keywords.

    Absent when no keyword appears; otherwise graded by depth_of.
    """
    low = text.lower()
    if not any(k.lower() in low for k in keywords if k):
        return CompletenessLabel.ABSENT
    return depth_of(text, min_detail_chars=min_detail_chars, require_metric=require_metric)


class HeuristicAgent:
    """Deterministic lexical grader used for offline runs and as ballast."""

    def __init__(self, agent_id: str, *, min_detail_chars: int = 400, require_metric: bool = True):
        self.agent_id = agent_id
        self.min_detail_chars = min_detail_chars
        self.require_metric = require_metric

    def judge(self, bundle: EvidenceBundle, sub: Subsection) -> AgentVerdict:
        kws = [k.lower() for k in bundle.query.keywords if k]
        hits = [c for c in bundle.chunks if any(k in c.snippet.lower() for k in kws)]
        if not hits:
            return AgentVerdict(
                self.agent_id,
                CompletenessLabel.ABSENT,
                rationale="no retrieved snippet mentions this field",
            )
        total = sum(len(c.snippet) for c in hits)
        has_metric = any(_METRIC_RE.search(c.snippet) for c in hits)
        if total >= self.min_detail_chars and (not self.require_metric or has_metric):
            label = CompletenessLabel.DETAILED
            why = f"{len(hits)} relevant snippet(s), {total} chars, metric tokens present"
        else:
            label = CompletenessLabel.MENTIONED
            why = f"{len(hits)} relevant snippet(s), {total} chars"
        return AgentVerdict(self.agent_id, label, rationale=why, cited_chunk_ranks=tuple(c.rank for c in hits))


_HEURISTIC_VARIANTS = {
    "": (400, True),
    "default": (400, True),
    "strict": (800, True),
    "lenient": (200, False),
}

_SYSTEM_PROMPT = (
    "You grade how thoroughly a model's public documentation covers one "
    "documentation field. Reply with a single JSON object and nothing else: "
    '{"label": "Absent"|"Mentioned"|"Detailed", "rationale": "<short reason>", '
    '"citations": [<evidence numbers you relied on>]}. '
    "Absent: the evidence says nothing about the field. Mentioned: it is "
    "acknowledged without substance. Detailed: specifics, numbers, or named "
    "methods are given."
)


def _strip_fence(text: str) -> str:
    body = text.strip()
    if body.startswith("```"):
        lines = body.splitlines()
        if lines and lines[0].startswith("```"):
            lines = lines[1:]
        if lines and lines[-1].strip().startswith("```"):
            lines = lines[:-1]
        body = "\n".join(lines).strip()
    return body


def parse_agent_reply(text: str, valid_ranks: Sequence[int]) -> tuple[CompletenessLabel, str, tuple[int, ...]]:
    """Strict parse of a grading reply; raises ValueError on any deviation."""
    body = _strip_fence(text)
    try:
        data = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ValueError(f"reply is not JSON: {exc}") from exc
    if not isinstance(data, dict) or set(data.keys()) != {"label", "rationale", "citations"}:
        raise ValueError("reply must be an object with exactly label, rationale, citations")
    label_text = data["label"]
    if label_text not in _BY_DISPLAY:
        raise ValueError(f"bad label {label_text!r}")
    label = _BY_DISPLAY[label_text]
    rationale = data["rationale"]
    if not isinstance(rationale, str):
        raise ValueError("rationale must be a string")
    if label is not CompletenessLabel.ABSENT and not rationale.strip():
        raise ValueError("rationale must be non-empty unless the label is Absent")
    citations = data["citations"]
    if not isinstance(citations, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in citations):
        raise ValueError("citations must be a list of integers")
    valid = set(valid_ranks)
    bad = [c for c in citations if c not in valid]
    if bad:
        raise ValueError(f"citations reference unknown evidence: {bad}")
    return label, rationale, tuple(citations)


class LlmAgent:
    """Grades via a chat-completions API; malformed replies get two re-asks."""

    def __init__(
        self,
        agent_id: str,
        model: str,
        temperature: float = 0.0,
        *,
        api_url: str | None = None,
        api_key: str | None = None,
        client: httpx.Client | None = None,
        timeout: float = 30.0,
    ):
        self.agent_id = agent_id
        self.model = model
        self.temperature = temperature
        self.api_url = api_url or os.environ.get(ENV_LLM_URL) or DEFAULT_LLM_URL
        key = api_key if api_key is not None else os.environ.get(ENV_LLM_KEY)
        if not key:
            raise JudgingError(f"no grading API key; set {ENV_LLM_KEY}")
        self._key = key
        self._client = client or httpx.Client()
        self._timeout = timeout

    def _prompt(self, bundle: EvidenceBundle, sub: Subsection) -> str:
        parts = [
            f"Field: {sub.title}",
            f"Criteria: {sub.criteria_prompt or 'Is this field covered at all, and with specifics?'}",
            f"Model: {bundle.query.model.display_name} ({bundle.query.model.provider})",
            "Evidence:",
        ]
        if bundle.chunks:
            for c in bundle.chunks:
                parts.append(f"[{c.rank}] {c.title} ({c.source_url})\n{c.snippet}")
        else:
            parts.append("(none retrieved)")
        return "\n\n".join(parts)

    def _call(self, messages: list[dict]) -> str:
        payload = {"model": self.model, "messages": messages, "temperature": self.temperature}
        headers = {"Authorization": f"Bearer {self._key}"}
        try:
            resp = self._client.post(self.api_url, json=payload, headers=headers, timeout=self._timeout)
        except httpx.HTTPError as exc:
            raise JudgeTransportError(f"grading API unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise JudgeTransportError(f"grading API returned {resp.status_code}")
        try:
            return str(resp.json()["choices"][0]["message"]["content"])
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise JudgeTransportError(f"grading API response malformed: {exc}") from exc

    def judge(self, bundle: EvidenceBundle, sub: Subsection) -> AgentVerdict:
        valid_ranks = [c.rank for c in bundle.chunks]
        messages = [
            {"role": "system", "content": _SYSTEM_PROMPT},
            {"role": "user", "content": self._prompt(bundle, sub)},
        ]
        last_error = ""
        for _ in range(3):
            reply = self._call(messages)
            try:
                label, rationale, citations = parse_agent_reply(reply, valid_ranks)
            except ValueError as exc:
                last_error = str(exc)
                messages = messages + [
                    {"role": "assistant", "content": reply},
                    {"role": "user", "content": f"Invalid reply ({exc}). Send only the JSON object."},
                ]
                continue
            return AgentVerdict(self.agent_id, label, rationale=rationale, cited_chunk_ranks=citations)
        return AgentVerdict(self.agent_id, None, rationale=f"abstained: {last_error}")


def parse_agent_spec(spec: str, agent_id: str, **llm_kwargs):
    """Build one agent from a spec like "heuristic:strict" or "llm:grader-2@0.3"."""
    spec = spec.strip()
    if spec == "heuristic" or spec.startswith("heuristic:"):
        _, _, variant = spec.partition(":")
        try:
            chars, metric = _HEURISTIC_VARIANTS[variant]
        except KeyError:
            raise AgentSpecError(
                f"unknown heuristic variant {variant!r}; choose from strict, lenient, default"
            ) from None
        return HeuristicAgent(agent_id, min_detail_chars=chars, require_metric=metric)
    if spec.startswith("llm:"):
        rest = spec[4:]
        model, _, temp_text = rest.partition("@")
        if not model:
            raise AgentSpecError("llm spec needs a model name, e.g. llm:grader-2")
        temperature = 0.0
        if temp_text:
            try:
                temperature = float(temp_text)
            except ValueError:
                raise AgentSpecError(f"bad temperature {temp_text!r} in {spec!r}") from None
        return LlmAgent(agent_id, model, temperature, **llm_kwargs)
    raise AgentSpecError(f"unknown agent spec {spec!r}; expected heuristic[:variant] or llm:<model>[@temp]")


def build_panel(specs: Sequence[str], **llm_kwargs) -> list:
    return [parse_agent_spec(s, f"{s.strip()}#{i + 1}", **llm_kwargs) for i, s in enumerate(specs)]


def consensus(verdicts: Sequence[AgentVerdict], subsection_id: str = "") -> ConsensusResult:
    """Fold panel verdicts into one label.

    Uses the lower median of the ordinals over non-abstaining verdicts:
    with a strict majority it returns the majority label; an even split
    or a three-way spread resolves downward and is flagged tie_broken.
    Fewer than two usable verdicts is an error.
    """
    usable = [v for v in verdicts if not v.abstained]
    if len(usable) < 2:
        raise JudgingError(
            f"need at least 2 non-abstaining verdicts for {subsection_id or 'field'}, got {len(usable)}"
        )
    ordinals = sorted(int(v.label) for v in usable)
    label = CompletenessLabel(ordinals[(len(ordinals) - 1) // 2])
    counts = Counter(ordinals)
    unanimous = len(counts) == 1
    tie_broken = max(counts.values()) * 2 <= len(ordinals)
    return ConsensusResult(
        subsection_id=subsection_id,
        label=label,
        verdicts=tuple(verdicts),
        unanimous=unanimous,
        tie_broken=tie_broken,
    )


def _sources_for(bundle: EvidenceBundle, verdicts: Sequence[AgentVerdict]) -> tuple[str, ...]:
    cited: set[int] = set()
    for v in verdicts:
        if not v.abstained:
            cited.update(v.cited_chunk_ranks)
    by_rank = {c.rank: c.source_url for c in bundle.chunks}
    seen: list[str] = []
    for rank in sorted(cited):
        url = by_rank.get(rank)
        if url and url not in seen:
            seen.append(url)
    return tuple(seen)


def evaluate_subsection(bundle: EvidenceBundle, sub: Subsection, agents: Sequence) -> ConsensusResult:
    """Run every agent on one field's evidence and take consensus.

    An agent that raises becomes an abstention rather than killing the
    run; consensus still needs two usable verdicts underneath it.
    """
    if bundle.subsection_id != sub.id:
        raise JudgingError(f"evidence for {bundle.subsection_id!r} offered against field {sub.id!r}")
    valid_ranks = {c.rank for c in bundle.chunks}
    verdicts: list[AgentVerdict] = []
    for agent in agents:
        try:
            v = agent.judge(bundle, sub)
        except JudgingError as exc:
            v = AgentVerdict(agent.agent_id, None, rationale=f"abstained: {exc}")
        if not set(v.cited_chunk_ranks) <= valid_ranks:
            raise JudgingError(f"agent {v.agent_id} cited evidence that does not exist")
        verdicts.append(v)
    result = consensus(verdicts, sub.id)
    return replace(result, evidence_sources=_sources_for(bundle, verdicts))


def _unscorable(subsection_id: str, note: str, verdicts: tuple[AgentVerdict, ...] = ()) -> ConsensusResult:
    return ConsensusResult(
        subsection_id=subsection_id,
        label=CompletenessLabel.ABSENT,
        verdicts=verdicts,
        unanimous=False,
        tie_broken=False,
        unscorable=True,
        note=note,
    )


def judge_model(
    bundles: dict[str, EvidenceBundle],
    framework: Framework,
    agents: Sequence,
    parallelism: int = 1,
) -> dict[str, ConsensusResult]:
    """Judge every rubric field; unjudgeable fields come back unscorable."""

    def one(sub: Subsection) -> ConsensusResult:
        bundle = bundles.get(sub.id)
        if bundle is None:
            return _unscorable(sub.id, "no evidence bundle for this field")
        if bundle.failed:
            return _unscorable(sub.id, f"retrieval failed: {bundle.error or 'unknown error'}")
        try:
            return evaluate_subsection(bundle, sub, agents)
        except JudgingError as exc:
            return _unscorable(sub.id, str(exc))

    subs = framework.subsections()
    workers = max(1, parallelism)
    if workers == 1:
        results = [one(s) for s in subs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, subs))
    return {r.subsection_id: r for r in results}
