"""Run orchestration shared by the command line entry points.

Wires backends, agent panels, retrieval, judging, scoring and storage
together for single-model runs, fleet batches, and local corpus
analysis. Nothing here is interactive; errors surface as exceptions the
command line maps to exit codes.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .builtin import builtin_framework
from .cards import load_corpus, section_subtree_text
from .judge import CompletenessLabel, JudgingError, build_panel, depth_of, judge_model
from .normalize import Cluster, canonicalize, check_threshold, cluster_names, seed_lexicon
from .retrieve import (
    BundleCache,
    CorpusBackend,
    Limits,
    LiveSearchBackend,
    ModelIdentity,
    RetrievalError,
    RetrievalRunError,
    retrieve_all,
)
from .schema import Framework, load_framework
from .score import (
    AggregationError,
    PresenceRow,
    TransparencyReport,
    aggregate,
    format_points,
    point_loss_by_subsection_cp,
    presence_stats,
    provider_compliance,
    write_point_loss_csv,
    write_presence_csv,
    write_provider_csv,
)
from .seeds import CATEGORY_ROLLUP
from .store import ReportDiff, RunManifest, save_manifest, save_report
from .util import utc_timestamp


class UsageError(Exception):
    """The invocation itself is wrong (flags, files, panel size)."""


class BatchRunError(Exception):
    """Every model in a batch failed."""


@dataclass(frozen=True)
class RunConfig:
    backend_spec: str
    framework_spec: str = "builtin"
    agent_specs: str = "heuristic,heuristic,heuristic"
    threshold: float = 0.55
    parallelism: int = 4
    max_chunks: int = 8
    timeout: float = 10.0
    out_root: Path = field(default_factory=lambda: Path("out"))
    allow_small_panel: bool = False


def load_framework_spec(spec: str) -> Framework:
    """"builtin" or a path to a rubric JSON file."""
    if spec == "builtin":
        return builtin_framework()
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"framework file not found: {spec}")
    return load_framework(path.read_text(encoding="utf-8"))


def make_backend(spec: str):
    if spec == "live":
        return LiveSearchBackend()
    if spec.startswith("corpus:"):
        root = spec[len("corpus:") :]
        if not root:
            raise UsageError("corpus backend needs a directory: corpus:<dir>")
        path = Path(root)
        if not path.is_dir():
            raise UsageError(f"corpus directory not found: {root}")
        return CorpusBackend(path)
    raise UsageError(f"unknown backend {spec!r}; expected live or corpus:<dir>")


def make_agents(specs_csv: str, allow_small_panel: bool = False) -> list:
    specs = [s.strip() for s in specs_csv.split(",") if s.strip()]
    if not specs:
        raise UsageError("no agents given")
    if len(specs) < 3 and not allow_small_panel:
        raise UsageError(
            f"agent panel has {len(specs)} member(s); consensus wants at least 3 "
            "(pass --allow-small-panel to override)"
        )
    return build_panel(specs)


def _backend_detail(backend) -> str:
    root = getattr(backend, "root", None)
    if root is not None:
        return str(root)
    return str(getattr(backend, "api_url", ""))


def evaluate_model(
    model: ModelIdentity,
    framework: Framework,
    backend,
    agents,
    *,
    limits: Limits = Limits(),
    cache: BundleCache | None = None,
    parallelism: int = 4,
    created_at: str | None = None,
    run_manifest_ref: str = "",
) -> TransparencyReport:
    """Retrieve, judge, and aggregate one model end to end."""
    bundles = retrieve_all(backend, model, framework, limits, cache, parallelism)
    results = judge_model(bundles, framework, agents, parallelism=parallelism)
    return aggregate(results, framework, model, created_at=created_at, run_manifest_ref=run_manifest_ref)


def _new_run_id(started_at: str) -> str:
    return "run-" + started_at.replace("-", "").replace(":", "")


@dataclass(frozen=True)
class ScoreOutcome:
    report: TransparencyReport
    report_path: Path
    manifest_path: Path


def run_score(model: ModelIdentity, cfg: RunConfig) -> ScoreOutcome:
    framework = load_framework_spec(cfg.framework_spec)
    backend = make_backend(cfg.backend_spec)
    agents = make_agents(cfg.agent_specs, cfg.allow_small_panel)
    limits = Limits(max_chunks=cfg.max_chunks, timeout=cfg.timeout)
    cache = BundleCache(cfg.out_root / "cache")
    started = utc_timestamp()
    run_id = _new_run_id(started)
    report = evaluate_model(
        model,
        framework,
        backend,
        agents,
        limits=limits,
        cache=cache,
        parallelism=cfg.parallelism,
        run_manifest_ref=f"runs/{run_id}.json",
    )
    manifest = RunManifest(
        run_id=run_id,
        started_at=started,
        framework_version=framework.version,
        backend_id=backend.backend_id,
        backend_detail=_backend_detail(backend),
        agent_specs=tuple(s.strip() for s in cfg.agent_specs.split(",") if s.strip()),
        limits=(
            ("max_chunks", str(cfg.max_chunks)),
            ("parallelism", str(cfg.parallelism)),
            ("timeout", str(cfg.timeout)),
        ),
        cache_hits=cache.hits,
        cache_misses=cache.misses,
    )
    manifest_path = save_manifest(cfg.out_root, manifest)
    report_path = save_report(cfg.out_root, report)
    return ScoreOutcome(report, report_path, manifest_path)


# ── batch ────────────────────────────────────────────────────────────────────


def parse_models_json(text: str) -> list[ModelIdentity]:
    """Batch input: a JSON array of {model_id, display_name, provider, ...}."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"models file is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise UsageError("models file must be a JSON array")
    models = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "model_id" not in item:
            raise UsageError(f"models[{i}] must be an object with a model_id")
        models.append(ModelIdentity.from_dict(item))
    return models


@dataclass(frozen=True)
class BatchItem:
    model_id: str
    report_path: Path | None
    total_cp: int | None
    error: str = ""

    @property
    def ok(self) -> bool:
        return self.error == ""


@dataclass(frozen=True)
class BatchOutcome:
    items: tuple[BatchItem, ...]
    manifest_path: Path
    analytics_dir: Path


def run_batch(models: list[ModelIdentity], cfg: RunConfig) -> BatchOutcome:
    """Score a fleet: per-model isolation, shared cache, analytics rollup.

    One failing model is reported and skipped; a batch where every model
    fails raises. Analytics CSVs are recomputed from the successful
    reports only.
    """
    if not models:
        raise UsageError("batch file lists no models")
    ids = [m.model_id for m in models]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise UsageError(f"duplicate model ids in batch: {dupes}")
    framework = load_framework_spec(cfg.framework_spec)
    backend = make_backend(cfg.backend_spec)
    agents = make_agents(cfg.agent_specs, cfg.allow_small_panel)
    limits = Limits(max_chunks=cfg.max_chunks, timeout=cfg.timeout)
    cache = BundleCache(cfg.out_root / "cache")
    started = utc_timestamp()
    run_id = _new_run_id(started)
    manifest_ref = f"runs/{run_id}.json"

    def one(model: ModelIdentity) -> tuple[BatchItem, TransparencyReport | None]:
        try:
            report = evaluate_model(
                model,
                framework,
                backend,
                agents,
                limits=limits,
                cache=cache,
                parallelism=1,
                run_manifest_ref=manifest_ref,
            )
            path = save_report(cfg.out_root, report)
            return BatchItem(model.model_id, path, report.total_cp), report
        except (RetrievalRunError, RetrievalError, JudgingError, AggregationError) as exc:
            return BatchItem(model.model_id, None, None, error=f"{type(exc).__name__}: {exc}"), None

    workers = max(1, cfg.parallelism)
    if workers == 1:
        pairs = [one(m) for m in models]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(one, models))
    items = tuple(p[0] for p in pairs)
    reports = [p[1] for p in pairs if p[1] is not None]
    if not reports:
        first = next((i.error for i in items if i.error), "unknown error")
        raise BatchRunError(f"all {len(models)} models failed; first error: {first}")

    manifest = RunManifest(
        run_id=run_id,
        started_at=started,
        framework_version=framework.version,
        backend_id=backend.backend_id,
        backend_detail=_backend_detail(backend),
        agent_specs=tuple(s.strip() for s in cfg.agent_specs.split(",") if s.strip()),
        limits=(
            ("max_chunks", str(cfg.max_chunks)),
            ("parallelism", str(cfg.parallelism)),
            ("timeout", str(cfg.timeout)),
        ),
        cache_hits=cache.hits,
        cache_misses=cache.misses,
    )
    manifest_path = save_manifest(cfg.out_root, manifest)

    analytics_dir = cfg.out_root / "analytics"
    analytics_dir.mkdir(parents=True, exist_ok=True)
    write_point_loss_csv(analytics_dir / "point_loss.csv", point_loss_by_subsection_cp(reports))
    write_provider_csv(analytics_dir / "provider_compliance.csv", provider_compliance(reports))
    judgments = {
        (r.model.model_id, s.subsection_id): s.label
        for r in reports
        for s in r.subsection_scores
    }
    concepts = [sub.id for sub in framework.subsections()]
    displays = {sub.id: sub.title for sub in framework.subsections()}
    scored_models = [r.model.model_id for r in reports]
    write_presence_csv(
        analytics_dir / "presence.csv",
        presence_stats(judgments, scored_models, concepts, displays),
    )
    return BatchOutcome(items=items, manifest_path=manifest_path, analytics_dir=analytics_dir)


# ── corpus analysis ──────────────────────────────────────────────────────────


@dataclass(frozen=True)
class CorpusAnalysis:
    document_count: int
    name_count: int
    matched_count: int
    clusters: tuple[Cluster, ...]
    presence: tuple[PresenceRow, ...]


def run_corpus_analysis(root, threshold: float = 0.55, out_dir=None) -> CorpusAnalysis:
    """Survey a directory of markdown cards.

    Clusters every heading name, canonicalizes each against the shipped
    lexicon, rolls rubric-field concepts up to categories, and grades the
    depth of each matched section. A document with no matching section
    counts as absent for that category.
    """
    root = Path(root)
    if not root.is_dir():
        raise UsageError(f"corpus directory not found: {root}")
    try:
        check_threshold(threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    docs = load_corpus(root)
    lexicon = seed_lexicon()
    names: list[str] = []
    matched = 0
    judgments: dict[tuple[str, str], CompletenessLabel] = {}
    for doc in docs:
        for idx, section in enumerate(doc.sections):
            if section.depth < 1:
                continue
            names.append(section.heading_text)
            m = canonicalize(section.heading_text, lexicon, threshold)
            if m.concept_id is None:
                continue
            matched += 1
            cat = m.concept_id if m.concept_id.startswith("category.") else CATEGORY_ROLLUP.get(m.concept_id)
            if cat is None:
                continue
            label = depth_of(section_subtree_text(doc, idx))
            key = (doc.source_id, cat)
            if label > judgments.get(key, CompletenessLabel.ABSENT):
                judgments[key] = label
    categories = sorted(c for c in lexicon.concept_ids() if c.startswith("category."))
    displays = {c: lexicon.get(c).display for c in categories}
    presence = presence_stats(judgments, [d.source_id for d in docs], categories, displays)
    clusters = cluster_names(names, threshold)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_clusters_csv(out_dir / "clusters.csv", clusters)
        write_presence_csv(out_dir / "presence.csv", presence)
    return CorpusAnalysis(
        document_count=len(docs),
        name_count=len(names),
        matched_count=matched,
        clusters=tuple(clusters),
        presence=tuple(presence),
    )


def write_clusters_csv(path, clusters) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["cluster_id", "representative", "member", "cluster_size"])
        for i, cluster in enumerate(clusters, start=1):
            for member in cluster.members:
                w.writerow([i, cluster.representative, member, cluster.size])


# ── presentation ─────────────────────────────────────────────────────────────


def format_report_summary(report: TransparencyReport) -> str:
    lines = [
        f"{report.model.model_id}: {format_points(report.total_cp)}/100 (rubric {report.framework_version})"
    ]
    for sid, cp in report.section_totals:
        lines.append(f"  {sid}: {format_points(cp)}")
    unscorable = sum(1 for s in report.subsection_scores if s.unscorable)
    ties = sum(1 for s in report.subsection_scores if s.tie_broken)
    lines.append(
        f"  fields: {len(report.subsection_scores)}, unscorable: {unscorable}, tie-broken: {ties}"
    )
    return "\n".join(lines)


def format_corpus_summary(a: CorpusAnalysis) -> str:
    return (
        f"{a.document_count} documents, {a.name_count} section names, "
        f"{len(a.clusters)} clusters, {a.matched_count}/{a.name_count} names matched"
    )


def _signed_points(cp: int) -> str:
    return ("+" if cp >= 0 else "") + format_points(cp)


def format_diff(d: ReportDiff) -> str:
    lines = [
        f"{d.model_id}: {len(d.changes)} change(s), total {_signed_points(d.total_delta_cp)} "
        f"({d.older_ref} -> {d.newer_ref})"
    ]
    for c in d.changes:
        lines.append(f"  {c.subsection_id}: {c.old_label} -> {c.new_label} ({_signed_points(c.delta_cp)})")
    return "\n".join(lines)
