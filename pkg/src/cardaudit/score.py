"""Scoring: weighted aggregation of per-field labels into a 0-100 total.

All arithmetic is integer-exact. Weights live in tenths of a point and
credit fractions in tenths, so one field contributes
weight_tenths * credit_tenths "centipoints" (cp), where 100 cp equals
one point. Floats appear only at the presentation edge.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .judge import CompletenessLabel, ConsensusResult
from .retrieve import ModelIdentity
from .schema import CreditPolicy, Framework, format_tenths, parse_weight_tenths
from .util import utc_timestamp


class AggregationError(Exception):
    """Judgments and rubric do not line up, or reports cannot be combined."""


def credit_of(label: CompletenessLabel, credits: CreditPolicy) -> int:
    """Credit in tenths for a label under a policy."""
    if label is CompletenessLabel.DETAILED:
        return credits.detailed_tenths
    if label is CompletenessLabel.MENTIONED:
        return credits.mentioned_tenths
    return credits.absent_tenths


def format_points(cp: int) -> str:
    """Render centipoints as a decimal string.

    One decimal place when exact at tenths ("87.5"), two otherwise
    ("0.25"). Never scientific, never trailing garbage.
    """
    sign = "-" if cp < 0 else ""
    whole, frac = divmod(abs(cp), 100)
    if frac % 10 == 0:
        return f"{sign}{whole}.{frac // 10}"
    return f"{sign}{whole}.{frac:02d}"


_POINTS_RE = re.compile(r"^(-?)(\d+)(?:\.(\d{1,2}))?$")


def parse_points(text: str) -> int:
    """Inverse of format_points; returns centipoints."""
    m = _POINTS_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad points value {text!r}")
    sign, whole, frac = m.group(1), m.group(2), m.group(3) or "0"
    cp = int(whole) * 100 + int(frac.ljust(2, "0"))
    return -cp if sign else cp


@dataclass(frozen=True, slots=True)
class SubsectionScore:
    subsection_id: str
    label: CompletenessLabel
    credit_tenths: int
    earned_cp: int
    lost_cp: int
    unscorable: bool
    tie_broken: bool
    unanimous: bool
    sources: tuple[str, ...]
    agents: tuple[str, ...]

    @property
    def points(self) -> float:
        return self.earned_cp / 100

    @property
    def points_lost(self) -> float:
        return self.lost_cp / 100


@dataclass(frozen=True, slots=True)
class TransparencyReport:
    model: ModelIdentity
    framework_version: str
    subsection_scores: tuple[SubsectionScore, ...]
    section_totals: tuple[tuple[str, int], ...]  # (section_id, earned_cp)
    total_cp: int
    created_at: str
    run_manifest_ref: str = ""
    schema_version: int = 1

    @property
    def total(self) -> float:
        return self.total_cp / 100

    def score_of(self, subsection_id: str) -> SubsectionScore | None:
        for s in self.subsection_scores:
            if s.subsection_id == subsection_id:
                return s
        return None


def _agent_summaries(result: ConsensusResult) -> tuple[str, ...]:
    out = []
    for v in result.verdicts:
        out.append(f"{v.agent_id}=abstained" if v.abstained else f"{v.agent_id}={v.label.display}")
    return tuple(out)


def aggregate(
    results: Mapping[str, ConsensusResult],
    framework: Framework,
    model: ModelIdentity,
    *,
    created_at: str | None = None,
    run_manifest_ref: str = "",
) -> TransparencyReport:
    """Combine per-field judgments into a weighted report.

    Every rubric field must have a judgment and judgments may not name
    unknown fields. Unscorable fields earn absent credit and keep their
    flag so readers can tell "not documented" from "could not judge".
    """
    known = {sub.id for sub in framework.subsections()}
    extra = set(results) - known
    if extra:
        raise AggregationError(f"judgments for unknown fields: {sorted(extra)}")
    credits = framework.credits
    scores: list[SubsectionScore] = []
    section_totals: list[tuple[str, int]] = []
    total_cp = 0
    for section in framework.sections:
        section_cp = 0
        for sub in section.subsections:
            r = results.get(sub.id)
            if r is None:
                raise AggregationError(f"missing judgment for field {sub.id!r}")
            ct = credits.absent_tenths if r.unscorable else credit_of(r.label, credits)
            earned = sub.weight_tenths * ct
            lost = sub.weight_tenths * (credits.detailed_tenths - ct)
            scores.append(
                SubsectionScore(
                    subsection_id=sub.id,
                    label=CompletenessLabel.ABSENT if r.unscorable else r.label,
                    credit_tenths=ct,
                    earned_cp=earned,
                    lost_cp=lost,
                    unscorable=r.unscorable,
                    tie_broken=r.tie_broken,
                    unanimous=r.unanimous,
                    sources=tuple(r.evidence_sources),
                    agents=_agent_summaries(r),
                )
            )
            section_cp += earned
        section_totals.append((section.id, section_cp))
        total_cp += section_cp
    return TransparencyReport(
        model=model,
        framework_version=framework.version,
        subsection_scores=tuple(scores),
        section_totals=tuple(section_totals),
        total_cp=total_cp,
        created_at=created_at or utc_timestamp(),
        run_manifest_ref=run_manifest_ref,
    )


# ── report serialization ─────────────────────────────────────────────────────


def report_to_dict(report: TransparencyReport) -> dict:
    return {
        "schema_version": report.schema_version,
        "model": report.model.to_dict(),
        "framework_version": report.framework_version,
        "created_at": report.created_at,
        "run_manifest_ref": report.run_manifest_ref,
        "total_points": format_points(report.total_cp),
        "sections": [
            {"id": sid, "points": format_points(cp)} for sid, cp in report.section_totals
        ],
        "subsections": [
            {
                "id": s.subsection_id,
                "label": s.label.display,
                "credit": format_tenths(s.credit_tenths),
                "points_earned": format_points(s.earned_cp),
                "points_lost": format_points(s.lost_cp),
                "unscorable": s.unscorable,
                "tie_broken": s.tie_broken,
                "unanimous": s.unanimous,
                "sources": list(s.sources),
                "agents": list(s.agents),
            }
            for s in report.subsection_scores
        ],
    }


def report_from_dict(data: dict) -> TransparencyReport:
    scores = tuple(
        SubsectionScore(
            subsection_id=str(item["id"]),
            label=CompletenessLabel.parse(item["label"]),
            credit_tenths=parse_weight_tenths(item["credit"]),
            earned_cp=parse_points(item["points_earned"]),
            lost_cp=parse_points(item["points_lost"]),
            unscorable=bool(item.get("unscorable", False)),
            tie_broken=bool(item.get("tie_broken", False)),
            unanimous=bool(item.get("unanimous", False)),
            sources=tuple(str(s) for s in item.get("sources", [])),
            agents=tuple(str(a) for a in item.get("agents", [])),
        )
        for item in data["subsections"]
    )
    section_totals = tuple((str(s["id"]), parse_points(s["points"])) for s in data["sections"])
    total_cp = parse_points(data["total_points"])
    if sum(cp for _, cp in section_totals) != total_cp:
        raise ValueError("section points do not sum to the report total")
    if sum(s.earned_cp for s in scores) != total_cp:
        raise ValueError("field points do not sum to the report total")
    return TransparencyReport(
        model=ModelIdentity.from_dict(data["model"]),
        framework_version=str(data["framework_version"]),
        subsection_scores=scores,
        section_totals=section_totals,
        total_cp=total_cp,
        created_at=str(data["created_at"]),
        run_manifest_ref=str(data.get("run_manifest_ref", "")),
        schema_version=int(data.get("schema_version", 1)),
    )


# ── fleet analytics ──────────────────────────────────────────────────────────


def point_loss_by_subsection_cp(reports: Sequence[TransparencyReport]) -> list[tuple[str, int]]:
    """Total centipoints lost per field across reports, worst first.

    Reports must share a rubric version or per-field sums would be
    meaningless. Ties order by field id.
    """
    versions = {r.framework_version for r in reports}
    if len(versions) > 1:
        raise AggregationError(f"cannot combine reports across rubric versions: {sorted(versions)}")
    sums: dict[str, int] = {}
    for report in reports:
        for s in report.subsection_scores:
            sums[s.subsection_id] = sums.get(s.subsection_id, 0) + s.lost_cp
    return sorted(sums.items(), key=lambda kv: (-kv[1], kv[0]))


def point_loss_by_subsection(reports: Sequence[TransparencyReport]) -> dict[str, float]:
    return {sid: cp / 100 for sid, cp in point_loss_by_subsection_cp(reports)}


@dataclass(frozen=True, slots=True)
class ProviderStat:
    provider: str
    model_count: int
    total_cp: int

    @property
    def mean_points(self) -> float:
        return self.total_cp / (self.model_count * 100)


def provider_compliance(reports: Sequence[TransparencyReport]) -> list[ProviderStat]:
    """Mean total per provider, sorted by provider name."""
    by_provider: dict[str, tuple[int, int]] = {}
    for r in reports:
        count, cp = by_provider.get(r.model.provider, (0, 0))
        by_provider[r.model.provider] = (count + 1, cp + r.total_cp)
    return [
        ProviderStat(provider=p, model_count=c, total_cp=cp)
        for p, (c, cp) in sorted(by_provider.items())
    ]


@dataclass(frozen=True, slots=True)
class PresenceRow:
    concept_id: str
    display: str
    presence_rate: float
    detailed: int
    mentioned: int
    absent: int


def presence_stats(
    judgments: Mapping[tuple[str, str], CompletenessLabel],
    models: Sequence[str],
    concepts: Sequence[str],
    displays: Mapping[str, str] | None = None,
) -> list[PresenceRow]:
    """Per-concept coverage across a set of documents.

    judgments maps (model, concept) to a label; pairs not present count
    as Absent. presence_rate is the fraction of models with a non-absent
    label. Rows come back in the given concept order.
    """
    displays = displays or {}
    rows = []
    for concept in concepts:
        detailed = mentioned = absent = 0
        for model in models:
            label = judgments.get((model, concept), CompletenessLabel.ABSENT)
            if label is CompletenessLabel.DETAILED:
                detailed += 1
            elif label is CompletenessLabel.MENTIONED:
                mentioned += 1
            else:
                absent += 1
        rate = (detailed + mentioned) / len(models) if models else 0.0
        rows.append(
            PresenceRow(
                concept_id=concept,
                display=displays.get(concept, concept),
                presence_rate=rate,
                detailed=detailed,
                mentioned=mentioned,
                absent=absent,
            )
        )
    return rows


# ── CSV output ───────────────────────────────────────────────────────────────


def write_point_loss_csv(path, rows: Sequence[tuple[str, int]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["subsection_id", "points_lost"])
        for sid, cp in rows:
            w.writerow([sid, format_points(cp)])


def write_provider_csv(path, stats: Sequence[ProviderStat]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["provider", "mean_total", "model_count"])
        for s in stats:
            w.writerow([s.provider, f"{s.mean_points:.1f}", s.model_count])


def write_presence_csv(path, rows: Sequence[PresenceRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["concept", "display", "presence_rate", "detailed", "mentioned", "absent"])
        for r in rows:
            w.writerow([r.concept_id, r.display, f"{r.presence_rate:.6f}", r.detailed, r.mentioned, r.absent])
