"""cardaudit: score how thoroughly AI models are documented.

Parse model cards, normalize their heading names, retrieve evidence per
rubric field, grade completeness with a small agent panel, and aggregate
weighted 0-100 transparency reports that persist and diff over time.
"""

from .builtin import BUILTIN_VERSION, builtin_framework
from .cards import ModelCardDocument, load_card, load_corpus, parse_card
from .judge import (
    AgentVerdict,
    CompletenessLabel,
    ConsensusResult,
    HeuristicAgent,
    JudgingError,
    LlmAgent,
    consensus,
    judge_model,
)
from .normalize import ConceptLexicon, canonicalize, cluster_names, seed_lexicon, similarity
from .pipeline import RunConfig, evaluate_model, run_batch, run_corpus_analysis, run_score
from .retrieve import (
    BundleCache,
    CorpusBackend,
    EvidenceBundle,
    EvidenceChunk,
    Limits,
    LiveSearchBackend,
    ModelIdentity,
    Query,
    retrieve_all,
)
from .schema import CreditPolicy, Framework, Section, Subsection, load_framework, parse_framework
from .score import TransparencyReport, aggregate, report_from_dict, report_to_dict
from .store import diff_reports, list_reports, load_report, save_report

__version__ = "0.1.0"

__all__ = [
    "AgentVerdict",
    "BUILTIN_VERSION",
    "BundleCache",
    "CompletenessLabel",
    "ConceptLexicon",
    "ConsensusResult",
    "CorpusBackend",
    "CreditPolicy",
    "EvidenceBundle",
    "EvidenceChunk",
    "Framework",
    "HeuristicAgent",
    "JudgingError",
    "Limits",
    "LiveSearchBackend",
    "LlmAgent",
    "ModelCardDocument",
    "ModelIdentity",
    "Query",
    "RunConfig",
    "Section",
    "Subsection",
    "TransparencyReport",
    "aggregate",
    "builtin_framework",
    "canonicalize",
    "cluster_names",
    "consensus",
    "diff_reports",
    "evaluate_model",
    "judge_model",
    "list_reports",
    "load_card",
    "load_corpus",
    "load_framework",
    "load_report",
    "parse_card",
    "parse_framework",
    "report_from_dict",
    "report_to_dict",
    "retrieve_all",
    "run_batch",
    "run_corpus_analysis",
    "run_score",
    "save_report",
    "seed_lexicon",
    "similarity",
]
