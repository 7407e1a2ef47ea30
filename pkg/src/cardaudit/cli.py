"""Command line interface.

Exit codes: 0 success, 1 domain failure (invalid rubric contents, failed
retrieval or judging, diff mismatch), 2 usage or I/O problems (bad
flags, missing files, unreadable stores).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .builtin import builtin_framework
from .judge import AgentSpecError, JudgingError
from .normalize import check_threshold
from .pipeline import (
    BatchRunError,
    RunConfig,
    UsageError,
    format_corpus_summary,
    format_diff,
    format_report_summary,
    parse_models_json,
    run_batch,
    run_corpus_analysis,
    run_score,
)
from .retrieve import ModelIdentity, RetrievalError, RetrievalRunError
from .schema import (
    FrameworkParseError,
    FrameworkValidationError,
    parse_framework,
    serialize_framework,
    validate_framework,
)
from .score import AggregationError, format_points
from .store import StoreError, StoreReadError, diff_reports, load_report


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--backend", required=True, help="live or corpus:<dir>")
    p.add_argument("--agents", default="heuristic,heuristic,heuristic",
                   help="comma-separated agent specs (heuristic[:variant], llm:<model>[@temp])")
    p.add_argument("--framework", default="builtin", help="builtin or a rubric JSON file")
    p.add_argument("--threshold", type=float, default=0.55, help="name-matching threshold in (0, 1]")
    p.add_argument("--parallelism", type=int, default=4)
    p.add_argument("--max-chunks", type=int, default=8, help="evidence chunks kept per field")
    p.add_argument("--timeout", type=float, default=10.0, help="per-request timeout in seconds")
    p.add_argument("--out", default="out", help="output root for reports, runs, cache")
    p.add_argument("--allow-small-panel", action="store_true",
                   help="permit fewer than 3 judging agents")


def _config(args: argparse.Namespace) -> RunConfig:
    try:
        check_threshold(args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.parallelism < 1:
        raise UsageError(f"parallelism must be at least 1, got {args.parallelism}")
    if args.max_chunks < 1:
        raise UsageError(f"max-chunks must be at least 1, got {args.max_chunks}")
    return RunConfig(
        backend_spec=args.backend,
        framework_spec=args.framework,
        agent_specs=args.agents,
        threshold=args.threshold,
        parallelism=args.parallelism,
        max_chunks=args.max_chunks,
        timeout=args.timeout,
        out_root=Path(args.out),
        allow_small_panel=args.allow_small_panel,
    )


def cmd_schema_export(args: argparse.Namespace) -> int:
    text = serialize_framework(builtin_framework())
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_schema_validate(args: argparse.Namespace) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    framework = parse_framework(text)
    violations = validate_framework(framework)
    if violations:
        for v in violations:
            print(v)
        return 1
    print(
        f"ok: version {framework.version}, {len(framework.sections)} sections, "
        f"{len(framework.subsections())} fields"
    )
    return 0


def cmd_analyze_corpus(args: argparse.Namespace) -> int:
    out_dir = Path(args.out) if args.out else None
    analysis = run_corpus_analysis(Path(args.dir), threshold=args.threshold, out_dir=out_dir)
    print(format_corpus_summary(analysis))
    if out_dir is not None:
        print(f"wrote {out_dir / 'clusters.csv'} and {out_dir / 'presence.csv'}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    cfg = _config(args)
    model = ModelIdentity(
        model_id=args.model_id,
        display_name=args.display_name or args.model_id,
        provider=args.provider,
        version_label=args.version_label,
    )
    outcome = run_score(model, cfg)
    print(format_report_summary(outcome.report))
    print(f"report: {outcome.report_path}")
    print(f"manifest: {outcome.manifest_path}")
    return 0


def cmd_batch(args: argparse.Namespace) -> int:
    cfg = _config(args)
    models = parse_models_json(Path(args.models).read_text(encoding="utf-8"))
    outcome = run_batch(models, cfg)
    for item in outcome.items:
        if item.ok:
            print(f"{item.model_id}: {format_points(item.total_cp)} -> {item.report_path}")
        else:
            print(f"{item.model_id}: FAILED ({item.error})")
    print(f"manifest: {outcome.manifest_path}")
    print(f"analytics: {outcome.analytics_dir}")
    return 0


def cmd_diff(args: argparse.Namespace) -> int:
    older = load_report(Path(args.older))
    newer = load_report(Path(args.newer))
    for report, which in ((older, "older"), (newer, "newer")):
        if report.model.model_id != args.model_id:
            raise StoreError(
                f"{which} report is for {report.model.model_id!r}, not {args.model_id!r}"
            )
    print(format_diff(diff_reports(older, newer)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cardaudit",
        description="Score how thoroughly AI models are documented.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    schema = sub.add_parser("schema", help="export or validate scoring rubrics")
    schema_sub = schema.add_subparsers(dest="schema_command", required=True)
    export = schema_sub.add_parser("export", help="write the builtin rubric as JSON")
    export.add_argument("--out", default="", help="file to write (default: stdout)")
    export.set_defaults(func=cmd_schema_export)
    validate = schema_sub.add_parser("validate", help="check a rubric file's invariants")
    validate.add_argument("file")
    validate.set_defaults(func=cmd_schema_validate)

    analyze = sub.add_parser("analyze-corpus", help="survey heading usage in local cards")
    analyze.add_argument("dir")
    analyze.add_argument("--threshold", type=float, default=0.55)
    analyze.add_argument("--out", default="", help="directory for clusters.csv and presence.csv")
    analyze.set_defaults(func=cmd_analyze_corpus)

    score = sub.add_parser("score", help="score one model's documentation")
    score.add_argument("model_id")
    score.add_argument("--display-name", default="", help="name used in search queries")
    score.add_argument("--provider", default="")
    score.add_argument("--version-label", default=None)
    _add_run_options(score)
    score.set_defaults(func=cmd_score)

    batch = sub.add_parser("batch", help="score a fleet from a models JSON file")
    batch.add_argument("models", help="JSON array of model identities")
    _add_run_options(batch)
    batch.set_defaults(func=cmd_batch)

    diff = sub.add_parser("diff", help="compare two saved reports of one model")
    diff.add_argument("model_id")
    diff.add_argument("older")
    diff.add_argument("newer")
    diff.set_defaults(func=cmd_diff)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except (UsageError, AgentSpecError, FrameworkParseError, StoreReadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        FrameworkValidationError,
        RetrievalRunError,
        RetrievalError,
        JudgingError,
        AggregationError,
        BatchRunError,
        StoreError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
