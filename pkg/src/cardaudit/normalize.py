"""Heading-name normalization: fuzzy matching against a concept lexicon.

Model cards name the same section a dozen ways ("Limitations", "Known
limitations", "Caveats and Recommendations"). This module folds those
variants together: a cheap string similarity, canonical-concept lookup,
and greedy clustering for names that match no known concept.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .seeds import SEED_LEXICON


class LexiconError(ValueError):
    """Raised for structurally invalid lexicon data."""


def normalize_name(name: str) -> str:
    """Lowercase, strip punctuation, collapse runs of whitespace."""
    out = []
    for ch in name.lower():
        out.append(ch if ch.isalnum() else " ")
    return " ".join("".join(out).split())


def _trigrams(s: str) -> set[str]:
    return {s[i : i + 3] for i in range(len(s) - 2)}


def similarity(a: str, b: str) -> float:
    """Score two heading names in [0, 1].

    Works on normalized forms. Equal strings score 1.0; otherwise the max
    of token-set Jaccard and character-trigram Dice, so both word-order
    swaps and small spelling edits land high.
    """
    na, nb = normalize_name(a), normalize_name(b)
    if na == nb:
        return 1.0
    ta, tb = set(na.split()), set(nb.split())
    jaccard = len(ta & tb) / len(ta | tb) if (ta or tb) else 0.0
    ga, gb = _trigrams(na), _trigrams(nb)
    denom = len(ga) + len(gb)
    dice = 2 * len(ga & gb) / denom if denom else 0.0
    return max(jaccard, dice)


def check_threshold(threshold: float) -> float:
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"threshold must be in (0, 1], got {threshold!r}")
    return threshold


@dataclass(frozen=True, slots=True)
class Concept:
    concept_id: str
    display: str
    aliases: tuple[str, ...]  # normalized, deduplicated, original order


@dataclass(frozen=True, slots=True)
class MatchResult:
    name: str
    concept_id: str | None
    score: float
    matched_alias: str | None

    @property
    def matched(self) -> bool:
        return self.concept_id is not None


@dataclass(frozen=True, slots=True)
class Cluster:
    representative: str  # normalized form of the founding name
    members: tuple[str, ...]  # original spellings, input order

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ConceptLexicon:
    concepts: tuple[Concept, ...]
    _by_id: dict[str, Concept] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {c.concept_id: c for c in self.concepts})

    def __len__(self) -> int:
        return len(self.concepts)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self._by_id

    def get(self, concept_id: str) -> Concept | None:
        return self._by_id.get(concept_id)

    def concept_ids(self) -> tuple[str, ...]:
        return tuple(c.concept_id for c in self.concepts)


def build_lexicon(entries: dict[str, tuple[str, tuple[str, ...]]]) -> ConceptLexicon:
    """Validate and assemble a lexicon from {id: (display, aliases)}.

    Aliases are normalized on the way in. Empty ids, alias lists that
    collapse to nothing, and normalized aliases claimed by two concepts
    all raise LexiconError.
    """
    concepts: list[Concept] = []
    owner: dict[str, str] = {}
    for concept_id, (display, aliases) in entries.items():
        if not concept_id or not concept_id.strip():
            raise LexiconError("concept id must be non-empty")
        seen: list[str] = []
        for alias in aliases:
            norm = normalize_name(alias)
            if not norm:
                raise LexiconError(f"{concept_id}: alias {alias!r} normalizes to nothing")
            if norm in seen:
                continue
            prior = owner.get(norm)
            if prior is not None and prior != concept_id:
                raise LexiconError(
                    f"alias {norm!r} claimed by both {prior!r} and {concept_id!r}"
                )
            owner[norm] = concept_id
            seen.append(norm)
        if not seen:
            raise LexiconError(f"{concept_id}: no usable aliases")
        concepts.append(Concept(concept_id, display or concept_id, tuple(seen)))
    if not concepts:
        raise LexiconError("lexicon has no concepts")
    return ConceptLexicon(tuple(concepts))


def seed_lexicon() -> ConceptLexicon:
    """The lexicon shipped with the package."""
    return build_lexicon(SEED_LEXICON)


def lexicon_from_dict(data: object) -> ConceptLexicon:
    """Accepts {id: [aliases]} or {id: {"display": ..., "aliases": [...]}}."""
    if not isinstance(data, dict):
        raise LexiconError("lexicon file must contain a JSON object")
    entries: dict[str, tuple[str, tuple[str, ...]]] = {}
    for concept_id, value in data.items():
        if isinstance(value, list):
            display, aliases = concept_id, value
        elif isinstance(value, dict):
            display = value.get("display", concept_id)
            aliases = value.get("aliases", [])
        else:
            raise LexiconError(f"{concept_id}: expected list or object, got {type(value).__name__}")
        if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
            raise LexiconError(f"{concept_id}: aliases must be a list of strings")
        if not isinstance(display, str):
            raise LexiconError(f"{concept_id}: display must be a string")
        entries[str(concept_id)] = (display, tuple(aliases))
    return build_lexicon(entries)


def parse_lexicon(text: str) -> ConceptLexicon:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconError(f"invalid JSON: {exc}") from exc
    return lexicon_from_dict(data)


def canonicalize(name: str, lexicon: ConceptLexicon, threshold: float = 0.55) -> MatchResult:
    """Map one heading name to its best concept, or to nothing.

    Deterministic: concepts are scanned in sorted-id order, aliases in
    sorted order, and a candidate only displaces the incumbent on a
    strictly greater score. The result is a match only when the best
    score clears the threshold.
    """
    check_threshold(threshold)
    best_score = 0.0
    best_concept: str | None = None
    best_alias: str | None = None
    for concept in sorted(lexicon.concepts, key=lambda c: c.concept_id):
        for alias in sorted(concept.aliases):
            score = similarity(name, alias)
            if score > best_score:
                best_score, best_concept, best_alias = score, concept.concept_id, alias
    if best_score >= threshold and best_concept is not None:
        return MatchResult(name, best_concept, best_score, best_alias)
    return MatchResult(name, None, best_score, None)


def cluster_names(names: list[str], threshold: float = 0.55) -> list[Cluster]:
    """Single-pass greedy clustering, order-dependent by design.

    Each name joins the earliest cluster whose representative scores at
    or above the threshold, else founds a new cluster whose representative
    is its own normalized form.
    """
    check_threshold(threshold)
    reps: list[str] = []
    members: list[list[str]] = []
    for name in names:
        norm = normalize_name(name)
        placed = False
        for i, rep in enumerate(reps):
            if similarity(norm, rep) >= threshold:
                members[i].append(name)
                placed = True
                break
        if not placed:
            reps.append(norm)
            members.append([name])
    return [Cluster(rep, tuple(mem)) for rep, mem in zip(reps, members)]
