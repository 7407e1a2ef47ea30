"""Report persistence and longitudinal comparison.

Reports land under <root>/reports/<model_id>/<created_at>.json with an
index.json per model for cheap listing. Writes are atomic (temp file
plus rename) and a same-second rerun gets a numeric suffix instead of
clobbering history. Diffs compare two runs of the same model under the
same rubric version and list only fields whose label moved.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from .score import TransparencyReport, format_points, parse_points, report_from_dict, report_to_dict
from .util import atomic_write_text


class StoreError(Exception):
    """Reports that cannot be saved, listed, or meaningfully compared."""


class StoreReadError(StoreError):
    """A report file exists but does not parse as a report."""


_SAVE_LOCK = threading.Lock()


def _reports_dir(root, model_id: str) -> Path:
    return Path(root) / "reports" / model_id


@dataclass(frozen=True, slots=True)
class IndexEntry:
    path: str  # filename within the model's report directory
    created_at: str
    total_cp: int


def save_report(root, report: TransparencyReport) -> Path:
    """Write one report and append it to the model's index.

    Returns the path written. Collisions on created_at get -2, -3, ...
    suffixes so nothing is ever overwritten.
    """
    directory = _reports_dir(root, report.model.model_id)
    text = json.dumps(report_to_dict(report), indent=2) + "\n"
    with _SAVE_LOCK:
        path = directory / f"{report.created_at}.json"
        n = 2
        while path.exists():
            path = directory / f"{report.created_at}-{n}.json"
            n += 1
        atomic_write_text(path, text)
        _index_append(directory, IndexEntry(path.name, report.created_at, report.total_cp))
    return path


def _index_path(directory: Path) -> Path:
    return directory / "index.json"


def _index_append(directory: Path, entry: IndexEntry) -> None:
    path = _index_path(directory)
    entries = _index_read(directory)
    entries.append(entry)
    payload = {
        "entries": [
            {"path": e.path, "created_at": e.created_at, "total": format_points(e.total_cp)}
            for e in entries
        ]
    }
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def _index_read(directory: Path) -> list[IndexEntry]:
    path = _index_path(directory)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return [
            IndexEntry(str(e["path"]), str(e["created_at"]), parse_points(str(e["total"])))
            for e in data["entries"]
        ]
    except FileNotFoundError:
        return []
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise StoreReadError(f"unreadable index {path}: {exc}") from exc


def list_reports(root, model_id: str) -> list[IndexEntry]:
    """Saved runs for a model, oldest first (append order)."""
    return _index_read(_reports_dir(root, model_id))


def load_report(path) -> TransparencyReport:
    path = Path(path)
    text = path.read_text(encoding="utf-8")  # missing file raises FileNotFoundError
    try:
        return report_from_dict(json.loads(text))
    except (ValueError, KeyError, TypeError) as exc:
        raise StoreReadError(f"unreadable report {path}: {exc}") from exc


# ── diffs ────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class SubsectionChange:
    subsection_id: str
    old_label: str
    new_label: str
    delta_cp: int

    @property
    def delta(self) -> float:
        return self.delta_cp / 100


@dataclass(frozen=True, slots=True)
class ReportDiff:
    model_id: str
    older_ref: str
    newer_ref: str
    changes: tuple[SubsectionChange, ...]
    total_delta_cp: int

    @property
    def total_delta(self) -> float:
        return self.total_delta_cp / 100


def diff_reports(older: TransparencyReport, newer: TransparencyReport) -> ReportDiff:
    """Label movements between two runs of the same model.

    Requires matching model ids, rubric versions, and field sets. The
    per-field deltas must explain the whole total movement; if they do
    not, the reports disagree in some way a label diff cannot show, and
    that is an error rather than a silent partial answer.
    """
    if older.model.model_id != newer.model.model_id:
        raise StoreError(
            f"cannot diff different models: {older.model.model_id!r} vs {newer.model.model_id!r}"
        )
    if older.framework_version != newer.framework_version:
        raise StoreError(
            f"cannot diff across rubric versions: {older.framework_version!r} vs {newer.framework_version!r}"
        )
    old_by_id = {s.subsection_id: s for s in older.subsection_scores}
    new_by_id = {s.subsection_id: s for s in newer.subsection_scores}
    if set(old_by_id) != set(new_by_id):
        raise StoreError("reports cover different field sets despite matching rubric versions")
    changes = []
    for s in newer.subsection_scores:
        old = old_by_id[s.subsection_id]
        if old.label is not s.label:
            changes.append(
                SubsectionChange(
                    subsection_id=s.subsection_id,
                    old_label=old.label.display,
                    new_label=s.label.display,
                    delta_cp=s.earned_cp - old.earned_cp,
                )
            )
    total_delta_cp = newer.total_cp - older.total_cp
    if sum(c.delta_cp for c in changes) != total_delta_cp:
        raise StoreError("per-field deltas do not account for the total change")
    return ReportDiff(
        model_id=newer.model.model_id,
        older_ref=older.created_at,
        newer_ref=newer.created_at,
        changes=tuple(changes),
        total_delta_cp=total_delta_cp,
    )


# ── run manifests ────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class RunManifest:
    run_id: str
    started_at: str
    framework_version: str
    backend_id: str
    backend_detail: str
    agent_specs: tuple[str, ...]
    limits: tuple[tuple[str, str], ...] = ()
    cache_hits: int = 0
    cache_misses: int = 0


def manifest_to_dict(m: RunManifest) -> dict:
    return {
        "run_id": m.run_id,
        "started_at": m.started_at,
        "framework_version": m.framework_version,
        "backend_id": m.backend_id,
        "backend_detail": m.backend_detail,
        "agent_specs": list(m.agent_specs),
        "limits": {k: v for k, v in m.limits},
        "cache_hits": m.cache_hits,
        "cache_misses": m.cache_misses,
    }


def manifest_from_dict(data: dict) -> RunManifest:
    return RunManifest(
        run_id=str(data["run_id"]),
        started_at=str(data["started_at"]),
        framework_version=str(data["framework_version"]),
        backend_id=str(data["backend_id"]),
        backend_detail=str(data.get("backend_detail", "")),
        agent_specs=tuple(str(s) for s in data.get("agent_specs", [])),
        limits=tuple(sorted((str(k), str(v)) for k, v in dict(data.get("limits", {})).items())),
        cache_hits=int(data.get("cache_hits", 0)),
        cache_misses=int(data.get("cache_misses", 0)),
    )


def save_manifest(root, manifest: RunManifest) -> Path:
    path = Path(root) / "runs" / f"{manifest.run_id}.json"
    atomic_write_text(path, json.dumps(manifest_to_dict(manifest), indent=2) + "\n")
    return path


def load_manifest(path) -> RunManifest:
    path = Path(path)
    try:
        return manifest_from_dict(json.loads(path.read_text(encoding="utf-8")))
    except FileNotFoundError:
        raise
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise StoreReadError(f"unreadable manifest {path}: {exc}") from exc
