"""Name normalization: similarity metric, lexicon matching, greedy clustering."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardaudit.normalize import (
    LexiconError,
    build_lexicon,
    canonicalize,
    check_threshold,
    cluster_names,
    lexicon_from_dict,
    normalize_name,
    parse_lexicon,
    seed_lexicon,
    similarity,
)

from conftest import NAME_LIST

names_st = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), min_size=0, max_size=40
)


# ── normalize_name ───────────────────────────────────────────────────────────


def test_normalize_name_basic():
    assert normalize_name("  Out-of-Scope Use!  ") == "out of scope use"
    assert normalize_name("Training Data") == "training data"
    assert normalize_name("___") == ""


@given(names_st)
def test_normalize_name_idempotent(name):
    once = normalize_name(name)
    assert normalize_name(once) == once


# ── similarity ───────────────────────────────────────────────────────────────


def test_license_licence_pinned():
    # char-trigram overlap: lic/ice/cen shared, 5 trigrams each side
    assert similarity("license", "licence") == 0.6
    assert similarity("license", "licence") >= 0.55


def test_equal_after_normalization_is_one():
    assert similarity("Intended Use", "intended   use") == 1.0
    assert similarity("Bias & Fairness", "bias fairness") == 1.0


def test_word_reordering_matches():
    assert similarity("use intended", "intended use") == 1.0


def test_disjoint_names_score_zero():
    assert similarity("aaa", "zzz") == 0.0


@given(names_st)
@settings(max_examples=300)
def test_similarity_self_identity(name):
    assert similarity(name, name) == 1.0


@given(names_st, names_st)
@settings(max_examples=300)
def test_similarity_symmetry(a, b):
    assert similarity(a, b) == similarity(b, a)


@given(names_st, names_st)
@settings(max_examples=300)
def test_similarity_bounded(a, b):
    assert 0.0 <= similarity(a, b) <= 1.0


def test_check_threshold():
    assert check_threshold(0.55) == 0.55
    assert check_threshold(1.0) == 1.0
    for bad in (0.0, -0.1, 1.01):
        with pytest.raises(ValueError):
            check_threshold(bad)


# ── lexicon ──────────────────────────────────────────────────────────────────


def test_seed_lexicon_shape():
    lex = seed_lexicon()
    assert len(lex) == 47
    assert "category.license" in lex
    assert "safety_evaluation.jailbreak" in lex
    seen = set()
    for concept in lex.concepts:
        for alias in concept.aliases:
            norm = normalize_name(alias)
            assert norm not in seen
            seen.add(norm)


def test_seed_aliases_match_their_own_concept():
    lex = seed_lexicon()
    for concept in lex.concepts:
        for alias in concept.aliases:
            m = canonicalize(alias, lex, threshold=0.55)
            assert m.matched
            assert m.concept_id == concept.concept_id
            assert m.score == 1.0


def test_build_lexicon_rejects_cross_concept_duplicate():
    with pytest.raises(LexiconError):
        build_lexicon(
            {
                "a": ("A", ("shared name",)),
                "b": ("B", ("Shared  NAME",)),
            }
        )


def test_build_lexicon_rejects_empty_id_and_alias():
    with pytest.raises(LexiconError):
        build_lexicon({"": ("X", ("x",))})
    with pytest.raises(LexiconError):
        build_lexicon({"a": ("A", ("   ",))})


def test_build_lexicon_dedupes_within_concept():
    lex = build_lexicon({"a": ("A", ("usage", "Usage", "usage examples"))})
    assert len(lex.get("a").aliases) == 2


def test_lexicon_from_dict_both_forms():
    short = lexicon_from_dict({"a": ["x", "y"]})
    long = lexicon_from_dict({"a": {"display": "The A", "aliases": ["x", "y"]}})
    assert short.get("a").aliases == long.get("a").aliases
    assert long.get("a").display == "The A"


def test_lexicon_from_dict_rejects_garbage():
    with pytest.raises(LexiconError):
        lexicon_from_dict(["not", "a", "mapping"])
    with pytest.raises(LexiconError):
        lexicon_from_dict({"a": 42})


def test_parse_lexicon():
    lex = parse_lexicon(json.dumps({"topic": ["alpha", "beta"]}))
    assert "topic" in lex
    with pytest.raises(LexiconError):
        parse_lexicon("{broken")


# ── canonicalize ─────────────────────────────────────────────────────────────


def test_canonicalize_miss_below_threshold():
    lex = build_lexicon({"a": ("A", ("completely unrelated words",))})
    m = canonicalize("zzzz", lex, threshold=0.9)
    assert not m.matched
    assert m.concept_id is None
    assert m.matched_alias is None


def test_canonicalize_near_variant():
    lex = seed_lexicon()
    m = canonicalize("Licence", lex, threshold=0.55)
    assert m.matched
    assert m.concept_id == "category.license"


def test_canonicalize_deterministic():
    lex = seed_lexicon()
    first = canonicalize("evaluation results", lex)
    for _ in range(5):
        again = canonicalize("evaluation results", lex)
        assert again == first


def test_canonicalize_bad_threshold():
    with pytest.raises(ValueError):
        canonicalize("x", seed_lexicon(), threshold=0.0)


# ── clustering ───────────────────────────────────────────────────────────────


def test_cluster_names_groups_variants():
    names = ["Usage", "usage", "How to use", "License", "Licence", "Unrelated Topic"]
    clusters = cluster_names(names, threshold=0.55)
    by_rep = {c.representative: set(c.members) for c in clusters}
    assert {"Usage", "usage"} <= by_rep[normalize_name("Usage")]
    assert {"License", "Licence"} <= by_rep[normalize_name("License")]


def test_cluster_representative_is_normalized_founder():
    clusters = cluster_names(["Intended Use", "intended use"], threshold=0.55)
    assert len(clusters) == 1
    assert clusters[0].representative == "intended use"
    assert clusters[0].members == ("Intended Use", "intended use")


def test_cluster_joins_earliest_qualifying():
    # both founders clear the bar for the third name; first founded wins
    clusters = cluster_names(["model usage", "usage model", "usage model notes"], threshold=0.5)
    assert clusters[0].members == ("model usage", "usage model", "usage model notes")


def test_cluster_deterministic():
    names = [ln for ln in NAME_LIST.read_text().splitlines() if ln.strip()]
    a = cluster_names(names, threshold=0.55)
    b = cluster_names(names, threshold=0.55)
    assert a == b


def test_cluster_bad_threshold():
    with pytest.raises(ValueError):
        cluster_names(["a"], threshold=1.5)


def test_fixture_list_has_200_names():
    names = [ln for ln in NAME_LIST.read_text().splitlines() if ln.strip()]
    assert len(names) == 200


@given(st.lists(names_st.filter(lambda s: normalize_name(s)), min_size=1, max_size=20))
@settings(max_examples=100)
def test_every_name_lands_in_exactly_one_cluster(names):
    clusters = cluster_names(names, threshold=0.7)
    placed = [m for c in clusters for m in c.members]
    assert sorted(placed) == sorted(names)
