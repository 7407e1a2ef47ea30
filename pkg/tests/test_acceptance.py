"""Acceptance gate: nine end-to-end guarantees the package must honor.

Each test covers one guarantee and prints a single PASS line when every
check inside it holds. All numeric comparisons are exact (integer
centipoints or Fraction arithmetic) unless a tolerance is stated.
"""

import itertools
import json
import random
import time
from fractions import Fraction

import httpx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardaudit.builtin import builtin_framework
from cardaudit.cards import iter_card_paths, load_card, parse_card
from cardaudit.cli import main
from cardaudit.judge import CompletenessLabel, ConsensusResult, consensus
from cardaudit.normalize import canonicalize, cluster_names, seed_lexicon, similarity
from cardaudit.retrieve import ModelIdentity
from cardaudit.score import (
    aggregate,
    point_loss_by_subsection_cp,
    presence_stats,
    provider_compliance,
)
from cardaudit.store import diff_reports

from conftest import CARD_DIR, DEMO_CORPUS, NAME_LIST, TS, verdict

A = CompletenessLabel.ABSENT
M = CompletenessLabel.MENTIONED
D = CompletenessLabel.DETAILED

CREDIT_TENTHS = {A: 0, M: 5, D: 10}


def result(sub_id, label):
    return ConsensusResult(
        subsection_id=sub_id,
        label=label,
        verdicts=(verdict("a", label), verdict("b", label), verdict("c", label)),
        unanimous=True,
        tie_broken=False,
    )


def full_results(framework, labels):
    return {sid: result(sid, lab) for sid, lab in labels.items()}


IDENT = ModelIdentity(model_id="m", display_name="M", provider="P")


# ── 1. the builtin rubric carries the published weights exactly ──────────────

# every row of the rubric: (section id, section weight tenths,
#                           [(subsection id, weight tenths), ...])
PUBLISHED_WEIGHTS = [
    ("model_details", 150, [
        ("model_details.model_overview", 30),
        ("model_details.organization", 10),
        ("model_details.model_version", 20),
        ("model_details.release_date", 5),
        ("model_details.version_progression", 10),
        ("model_details.architecture", 40),
        ("model_details.dependencies", 10),
        ("model_details.paper_links", 5),
        ("model_details.distribution_forms", 20),
    ]),
    ("inputs_outputs", 60, [
        ("inputs_outputs.inputs", 20),
        ("inputs_outputs.outputs", 20),
        ("inputs_outputs.token_count", 20),
    ]),
    ("model_data", 150, [
        ("model_data.training_dataset", 70),
        ("model_data.training_data_processing", 60),
        ("model_data.knowledge_count", 20),
    ]),
    ("implementation_sustainability", 50, [
        ("implementation_sustainability.hardware", 20),
        ("implementation_sustainability.software_frameworks", 20),
        ("implementation_sustainability.energy_use", 10),
    ]),
    ("intended_use", 100, [
        ("intended_use.primary_uses", 50),
        ("intended_use.primary_users", 20),
        ("intended_use.out_of_scope", 30),
    ]),
    ("critical_risk", 200, [
        ("critical_risk.cbrn", 50),
        ("critical_risk.cyber_risk", 50),
        ("critical_risk.harmful_manipulation", 40),
        ("critical_risk.child_safety", 40),
        ("critical_risk.privacy_risks", 20),
    ]),
    ("safety_evaluation", 250, [
        ("safety_evaluation.refusals", 10),
        ("safety_evaluation.disallowed_content", 40),
        ("safety_evaluation.sycophancy", 20),
        ("safety_evaluation.jailbreak", 40),
        ("safety_evaluation.hallucinations", 40),
        ("safety_evaluation.deception_behaviors", 40),
        ("safety_evaluation.fairness_bias", 30),
        ("safety_evaluation.adversarial_robustness", 20),
        ("safety_evaluation.red_teaming", 10),
    ]),
    ("risk_mitigations", 40, [
        ("risk_mitigations.risk_mitigation", 40),
    ]),
]


def test_builtin_rubric_weights_are_exact():
    fw = builtin_framework()
    assert len(fw.sections) == 8
    assert len(fw.subsections()) == 36

    assert [(s.id, s.weight_tenths) for s in fw.sections] == [
        (sid, w) for sid, w, _ in PUBLISHED_WEIGHTS
    ]
    for section, (_, _, subs) in zip(fw.sections, PUBLISHED_WEIGHTS):
        assert [(s.id, s.weight_tenths) for s in section.subsections] == subs
        # subsection weights sum to their section's weight, exactly
        assert sum(s.weight_tenths for s in section.subsections) == section.weight_tenths

    # named spot values, in tenths: 25, 20, 7, 0.5 points
    by_section = {s.id: s for s in fw.sections}
    assert by_section["safety_evaluation"].weight_tenths == 250
    assert by_section["critical_risk"].weight_tenths == 200
    assert fw.find_subsection("model_data.training_dataset").weight_tenths == 70
    assert fw.find_subsection("model_details.release_date").weight_tenths == 5

    # grand total exactly 100.0
    assert fw.total_weight_tenths() == 1000
    assert sum(s.weight_tenths for s in fw.subsections()) == 1000
    print("PASS criterion 1: builtin rubric matches the published table exactly "
          "(8 sections, 36 fields, total 100.0)")


# ── 2. aggregation equals an independent brute force ─────────────────────────


def test_aggregation_matches_brute_force_oracle():
    fw = builtin_framework()
    subs = fw.subsections()
    rng = random.Random(20260816)
    started = time.perf_counter()
    for _ in range(1000):
        labels = {s.id: rng.choice([A, M, D]) for s in subs}
        report = aggregate(full_results(fw, labels), fw, IDENT, created_at=TS)
        oracle = sum(
            (Fraction(s.weight_tenths, 10) * Fraction(CREDIT_TENTHS[labels[s.id]], 10)
             for s in subs),
            Fraction(0),
        )
        assert Fraction(report.total_cp, 100) == oracle
    elapsed = time.perf_counter() - started
    assert elapsed < 5.0
    print(f"PASS criterion 2: 1000 random label assignments equal the brute-force "
          f"sum exactly ({elapsed:.2f}s)")


# ── 3. worked end-to-end scores ──────────────────────────────────────────────


def test_worked_scores():
    fw = builtin_framework()
    subs = fw.subsections()

    every = lambda lab: {s.id: lab for s in subs}
    assert aggregate(full_results(fw, every(D)), fw, IDENT, created_at=TS).total_cp == 10000
    assert aggregate(full_results(fw, every(A)), fw, IDENT, created_at=TS).total_cp == 0

    mixed = {
        s.id: (M if s.id.startswith("safety_evaluation.") else D) for s in subs
    }
    report = aggregate(full_results(fw, mixed), fw, IDENT, created_at=TS)
    # Mentioned earns half credit, so a fully Mentioned 25-point section
    # costs 12.5 points: 100 - 0.5 * 25 = 87.5
    assert report.total_cp == 8750
    assert report.total == 87.5
    print("PASS criterion 3: worked scores hold exactly "
          "(all-Detailed 100.0, all-Absent 0.0, safety-Mentioned 87.5)")


# ── 4. consensus truth table ─────────────────────────────────────────────────

# expected (label, unanimous, tie_broken) for each unordered panel of three
CONSENSUS_TRUTH = {
    (A, A, A): (A, True, False),
    (A, A, M): (A, False, False),
    (A, A, D): (A, False, False),
    (A, M, M): (M, False, False),
    (A, M, D): (M, False, True),
    (A, D, D): (D, False, False),
    (M, M, M): (M, True, False),
    (M, M, D): (M, False, False),
    (M, D, D): (D, False, False),
    (D, D, D): (D, True, False),
}


def test_consensus_exhaustive_three_agent_panels():
    for panel in itertools.product([A, M, D], repeat=3):
        expected = CONSENSUS_TRUTH[tuple(sorted(panel))]
        r = consensus([verdict(f"a{i}", lab) for i, lab in enumerate(panel)], "s")
        assert (r.label, r.unanimous, r.tie_broken) == expected
        # order independence: the sorted key fully determined the answer
        # majority rule: any label held by 2+ agents wins
        counts = {lab: panel.count(lab) for lab in set(panel)}
        for lab, n in counts.items():
            if n >= 2:
                assert r.label is lab
        # betweenness: never outside the panel's range
        assert min(panel) <= r.label <= max(panel)
    # the three-way split lands on the middle grade
    split = consensus([verdict("x", A), verdict("y", M), verdict("z", D)], "s")
    assert split.label is M and split.tie_broken
    print("PASS criterion 4: all 27 ordered three-agent panels match the "
          "hand-written consensus table")


# ── 5. parser reconstruction ─────────────────────────────────────────────────


def test_parser_reconstructs_every_fixture_byte_for_byte():
    paths = iter_card_paths(CARD_DIR)
    assert len(paths) >= 20
    names = {p.name for p in paths}
    assert {"empty.md", "frontmatter_only.md", "malformed_frontmatter.md", "deep_nesting.md"} <= names
    for path in paths:
        doc = load_card(path)
        assert doc.reconstruct().encode("utf-8") == path.read_bytes(), path.name
    print(f"PASS criterion 5: {len(paths)} fixture cards reconstruct byte-identically "
          "(plus randomized documents, below)")


_heading_line = st.builds(
    lambda d, t, nl: "#" * d + " " + t + nl,
    st.integers(min_value=1, max_value=6),
    st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=24),
    st.sampled_from(["\n", "\r\n"]),
)
_text_line = st.builds(
    lambda t, nl: t + nl,
    st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=48),
    st.sampled_from(["\n", "\r\n"]),
)


@given(st.lists(st.one_of(_heading_line, _text_line), max_size=30))
@settings(max_examples=200)
def test_parser_reconstructs_randomized_documents(lines):
    text = "".join(lines)
    assert parse_card(text).reconstruct() == text


@given(st.text())
@settings(max_examples=200)
def test_parser_reconstructs_arbitrary_text(text):
    assert parse_card(text).reconstruct() == text


# ── 6. similarity properties and threshold monotonicity ─────────────────────

_name_st = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",)), min_size=0, max_size=40
)


@given(_name_st, _name_st)
@settings(max_examples=400)
def test_similarity_symmetry_and_identity(a, b):
    assert similarity(a, b) == similarity(b, a)
    assert similarity(a, a) == 1.0


# frozen before the implementation was finished: matched-name counts must
# fall and cluster counts must rise as the threshold tightens
THRESHOLD_LADDER = [
    (0.30, 174, 84),
    (0.40, 165, 109),
    (0.50, 160, 113),
    (0.55, 147, 124),
    (0.60, 139, 137),
    (0.70, 130, 161),
    (0.80, 122, 175),
    (0.90, 118, 182),
    (1.00, 115, 190),
]


def test_threshold_monotonicity_on_name_fixture():
    names = [ln for ln in NAME_LIST.read_text(encoding="utf-8").splitlines() if ln.strip()]
    assert len(names) == 200
    lex = seed_lexicon()
    observed = []
    for threshold, want_matches, want_clusters in THRESHOLD_LADDER:
        matches = sum(1 for n in names if canonicalize(n, lex, threshold=threshold).matched)
        clusters = len(cluster_names(names, threshold=threshold))
        assert (matches, clusters) == (want_matches, want_clusters), threshold
        observed.append((matches, clusters))
    match_counts = [m for m, _ in observed]
    cluster_counts = [c for _, c in observed]
    assert match_counts == sorted(match_counts, reverse=True)
    assert cluster_counts == sorted(cluster_counts)

    # spelling variant: pinned exact value, comfortably over the default bar
    assert similarity("license", "licence") == 0.6
    assert similarity("license", "licence") >= 0.55
    print("PASS criterion 6: similarity is symmetric with self-identity 1.0; "
          "match and cluster counts move monotonically across 9 thresholds; "
          "license/licence pinned at 0.6")


# ── 7. offline scoring is deterministic and network-free ─────────────────────


def _normalized_report_text(path) -> str:
    """Report JSON with the two timestamp-bearing fields pinned."""
    data = json.loads(path.read_text(encoding="utf-8"))
    data["created_at"] = "<created_at>"
    data["run_manifest_ref"] = "<run>"
    return json.dumps(data, sort_keys=True, indent=2)


def test_offline_scoring_is_deterministic(tmp_path, monkeypatch, capsys):
    def refuse(self, request, **kwargs):
        raise AssertionError(f"network touched: {request.url}")

    monkeypatch.setattr(httpx.Client, "send", refuse)

    outputs = []
    for i in range(5):
        out_root = tmp_path / f"run{i}"
        code = main([
            "score", "acme-lumen-8b",
            "--display-name", "Acme Lumen 8B",
            "--provider", "Acme AI",
            "--backend", f"corpus:{DEMO_CORPUS}",
            "--agents", "heuristic,heuristic,heuristic",
            "--out", str(out_root),
        ])
        assert code == 0
        reports = list((out_root / "reports" / "acme-lumen-8b").glob("*.json"))
        reports = [p for p in reports if p.name != "index.json"]
        assert len(reports) == 1
        outputs.append(_normalized_report_text(reports[0]))
    capsys.readouterr()
    assert len(set(outputs)) == 1
    print("PASS criterion 7: five consecutive offline runs produce byte-identical "
          "reports modulo timestamps, with zero network calls")


# ── 8. longitudinal diffs ────────────────────────────────────────────────────


def _report(fw, labels, created_at=TS):
    return aggregate(full_results(fw, labels), fw, IDENT, created_at=created_at)


def test_diff_tracks_label_movement_exactly():
    fw = builtin_framework()
    subs = fw.subsections()
    base = {s.id: A for s in subs}

    report = _report(fw, base)
    self_diff = diff_reports(report, report)
    assert self_diff.changes == () and self_diff.total_delta_cp == 0

    upgraded = dict(base)
    upgraded["risk_mitigations.risk_mitigation"] = D  # weight 4.0, Absent -> Detailed
    newer = _report(fw, upgraded, created_at="2026-02-01T00:00:00Z")
    d = diff_reports(report, newer)
    assert len(d.changes) == 1
    assert d.changes[0].delta_cp == 400
    assert d.total_delta_cp == 400
    assert d.total_delta == 4.0

    rng = random.Random(4242)
    for _ in range(30):
        la = {s.id: rng.choice([A, M, D]) for s in subs}
        lb = {s.id: rng.choice([A, M, D]) for s in subs}
        ra, rb = _report(fw, la), _report(fw, lb, created_at="2026-03-01T00:00:00Z")
        forward = diff_reports(ra, rb)
        backward = diff_reports(rb, ra)
        assert forward.total_delta_cp == -backward.total_delta_cp
        assert sum(c.delta_cp for c in forward.changes) == forward.total_delta_cp
    print("PASS criterion 8: self-diff is empty, a weight-4 upgrade moves the total "
          "by exactly +4.0, and randomized diffs are anti-symmetric")


# ── 9. fleet analytics equal independent recomputation ───────────────────────


def test_fleet_analytics_match_recomputation():
    fw = builtin_framework()
    subs = fw.subsections()
    rng = random.Random(9090)
    providers = ["Acme", "Beacon", "Cirrus", "Dynamo"]
    fleet = []
    raw_labels: dict[tuple[str, str], CompletenessLabel] = {}
    for i in range(10):
        mid = f"model-{i}"
        provider = providers[i % len(providers)]
        labels = {s.id: rng.choice([A, M, D]) for s in subs}
        for sid, lab in labels.items():
            raw_labels[(mid, sid)] = lab
        fleet.append(
            aggregate(
                full_results(fw, labels),
                fw,
                ModelIdentity(model_id=mid, display_name=mid, provider=provider),
                created_at=TS,
            )
        )

    model_ids = [r.model.model_id for r in fleet]
    weight = {s.id: s.weight_tenths for s in subs}

    # point loss per field, recomputed from raw labels
    expected_loss = {
        sid: sum(weight[sid] * (10 - CREDIT_TENTHS[raw_labels[(mid, sid)]]) for mid in model_ids)
        for sid in weight
    }
    expected_rows = sorted(expected_loss.items(), key=lambda kv: (-kv[1], kv[0]))
    assert point_loss_by_subsection_cp(fleet) == expected_rows

    # provider compliance, recomputed from raw labels
    def model_total(mid):
        return sum(weight[sid] * CREDIT_TENTHS[raw_labels[(mid, sid)]] for sid in weight)

    expected_providers = {}
    for i, mid in enumerate(model_ids):
        p = providers[i % len(providers)]
        count, cp = expected_providers.get(p, (0, 0))
        expected_providers[p] = (count + 1, cp + model_total(mid))
    got = provider_compliance(fleet)
    assert [(s.provider, s.model_count, s.total_cp) for s in got] == [
        (p, c, cp) for p, (c, cp) in sorted(expected_providers.items())
    ]

    # presence stats, recomputed by counting raw labels
    sub_ids = [s.id for s in subs]
    rows = presence_stats(raw_labels, model_ids, sub_ids)
    for row in rows:
        counts = {A: 0, M: 0, D: 0}
        for mid in model_ids:
            counts[raw_labels[(mid, row.concept_id)]] += 1
        assert (row.detailed, row.mentioned, row.absent) == (counts[D], counts[M], counts[A])
        assert row.presence_rate == (counts[D] + counts[M]) / len(model_ids)
    print("PASS criterion 9: point loss, provider compliance, and presence stats "
          "over a 10-model fleet equal independent recomputation exactly")
