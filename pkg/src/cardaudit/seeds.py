"""Seed data: concept lexicon, per-field keyword lists, category rollup.

Pure data, no imports. Aliases are written in normalized form (lowercase,
no punctuation) and must stay unique across the whole lexicon; the loader
enforces that. Concepts cover every builtin rubric field plus the eleven
corpus-analysis categories (ids prefixed "category.").
"""

from __future__ import annotations

# concept id -> (display name, aliases)
SEED_LEXICON: dict[str, tuple[str, tuple[str, ...]]] = {
    # ── corpus-analysis categories ───────────────────────────────────────────
    "category.model_architecture": (
        "Model Architecture",
        ("architecture", "model structure", "network architecture", "model design", "architectural details"),
    ),
    "category.compute_requirements": (
        "Compute Requirements",
        ("compute requirements", "hardware requirements", "system requirements", "compute",
         "memory requirements", "resource requirements"),
    ),
    "category.evaluation_metrics": (
        "Evaluation Metrics",
        ("evaluation", "evaluations", "evaluation results", "benchmarks", "benchmark results",
         "metrics", "performance", "results", "eval results", "evaluation metrics"),
    ),
    "category.license": (
        "License",
        ("license", "licence", "licensing", "license information", "terms of use", "model license"),
    ),
    "category.intended_use": (
        "Intended Use",
        ("intended use", "usage", "how to use", "use cases", "uses", "quickstart",
         "getting started", "usage examples", "direct use"),
    ),
    "category.training_data": (
        "Training Data",
        ("training data", "training", "data", "datasets", "pretraining data"),
    ),
    "category.limitations": (
        "Limitations",
        ("limitations", "known limitations", "caveats", "shortcomings", "weaknesses",
         "limitations and caveats"),
    ),
    "category.bias_fairness": (
        "Bias and Fairness",
        ("bias and fairness", "bias", "fairness", "biases", "fairness and bias",
         "bias risks and limitations"),
    ),
    "category.safety_evaluation": (
        "Safety Evaluation",
        ("safety evaluation", "safety evaluations", "safety", "safety testing",
         "safety assessment", "safety considerations"),
    ),
    "category.out_of_scope_use": (
        "Out-of-Scope Use",
        ("out of scope use", "out of scope", "misuse", "prohibited uses", "restrictions",
         "unsupported uses"),
    ),
    "category.interpretability": (
        "Interpretability",
        ("interpretability", "explainability", "model interpretability", "attention analysis",
         "mechanistic interpretability"),
    ),
    # ── rubric fields ────────────────────────────────────────────────────────
    "model_details.model_overview": (
        "Model overview",
        ("model overview", "model description", "overview", "description", "about",
         "introduction", "model summary", "summary", "model details"),
    ),
    "model_details.organization": (
        "Organization developing the model",
        ("organization developing the model", "developed by", "developer", "organization",
         "model developer", "authors"),
    ),
    "model_details.model_version": (
        "Model Version",
        ("model version", "version", "versions", "release version"),
    ),
    "model_details.release_date": (
        "Model Release Date",
        ("model release date", "release date", "released", "launch date"),
    ),
    "model_details.version_progression": (
        "Model Version Progression",
        ("model version progression", "version history", "changelog", "release notes", "whats new"),
    ),
    "model_details.architecture": (
        "Model Architecture",
        ("model architecture", "transformer architecture", "parameter count", "model size",
         "number of parameters"),
    ),
    "model_details.dependencies": (
        "Model Dependencies",
        ("model dependencies", "dependencies", "base model", "built on", "fine tuned from"),
    ),
    "model_details.paper_links": (
        "Paper and relevant links",
        ("paper and relevant links", "paper", "papers", "relevant links", "references",
         "citation", "links", "resources"),
    ),
    "model_details.distribution_forms": (
        "Model Distribution Forms",
        ("model distribution forms", "distribution", "availability", "access", "how to access",
         "download"),
    ),
    "inputs_outputs.inputs": (
        "Inputs",
        ("inputs", "model inputs", "input format", "input modalities", "input"),
    ),
    "inputs_outputs.outputs": (
        "Outputs",
        ("outputs", "model outputs", "output format", "output modalities", "output"),
    ),
    "inputs_outputs.token_count": (
        "Token Count",
        ("token count", "context window", "context length", "token limits", "max tokens"),
    ),
    "model_data.training_dataset": (
        "Training Dataset",
        ("training dataset", "dataset", "data sources", "corpus", "pretraining corpus",
         "training set"),
    ),
    "model_data.training_data_processing": (
        "Training Data Processing",
        ("training data processing", "data processing", "data filtering", "data cleaning",
         "deduplication", "preprocessing"),
    ),
    "model_data.knowledge_count": (
        "Knowledge Count",
        ("knowledge count", "knowledge cutoff", "cutoff date", "data freshness", "training cutoff"),
    ),
    "implementation_sustainability.hardware": (
        "Hardware Used During Training & Inference",
        ("hardware used during training and inference", "hardware", "training hardware",
         "gpus used", "compute infrastructure"),
    ),
    "implementation_sustainability.software_frameworks": (
        "Software Frameworks & Tooling",
        ("software frameworks and tooling", "software frameworks", "frameworks",
         "software stack", "tooling", "libraries"),
    ),
    "implementation_sustainability.energy_use": (
        "Energy Use / Sustainability Metrics",
        ("energy use", "sustainability metrics", "energy consumption", "carbon footprint",
         "emissions", "environmental impact", "sustainability"),
    ),
    "intended_use.primary_uses": (
        "Primary intended uses",
        ("primary intended uses", "primary uses", "intended uses", "primary use cases",
         "applications"),
    ),
    "intended_use.primary_users": (
        "Primary intended users",
        ("primary intended users", "intended users", "target users", "audience",
         "target audience", "users"),
    ),
    "intended_use.out_of_scope": (
        "Out-of-scope use cases",
        ("out of scope use cases", "not intended for", "unintended use",
         "out of scope applications", "disclaimed uses"),
    ),
    "critical_risk.cbrn": (
        "CBRN (Chemical, Biological, Radiological or Nuclear)",
        ("cbrn", "chemical biological radiological nuclear", "biological risk", "bioweapons",
         "nuclear risk", "weapons of mass destruction", "biosecurity"),
    ),
    "critical_risk.cyber_risk": (
        "Cyber Risk",
        ("cyber risk", "cybersecurity", "cyber capabilities", "offensive cyber", "hacking",
         "cyber offense"),
    ),
    "critical_risk.harmful_manipulation": (
        "Harmful Manipulation",
        ("harmful manipulation", "manipulation", "persuasion", "influence operations",
         "persuasiveness"),
    ),
    "critical_risk.child_safety": (
        "Child Safety Evaluations",
        ("child safety evaluations", "child safety", "csam", "minor safety", "child protection"),
    ),
    "critical_risk.privacy_risks": (
        "Privacy Risks",
        ("privacy risks", "privacy", "personal data", "pii", "data protection", "memorization"),
    ),
    "safety_evaluation.refusals": (
        "Refusals",
        ("refusals", "refusal behavior", "refusal rates", "over refusal", "refusal"),
    ),
    "safety_evaluation.disallowed_content": (
        "Disallowed Content Handling",
        ("disallowed content handling", "disallowed content", "content policy",
         "prohibited content", "harmful content"),
    ),
    "safety_evaluation.sycophancy": (
        "Sycophancy",
        ("sycophancy", "sycophancy evaluation", "agreement bias", "flattery"),
    ),
    "safety_evaluation.jailbreak": (
        "Jailbreak",
        ("jailbreak", "jailbreaks", "jailbreak resistance", "jailbreaking", "prompt injection"),
    ),
    "safety_evaluation.hallucinations": (
        "Hallucinations",
        ("hallucinations", "hallucination", "factuality", "hallucination rate", "factual accuracy"),
    ),
    "safety_evaluation.deception_behaviors": (
        "Deception Behaviors",
        ("deception behaviors", "deception", "deceptive behavior", "honesty", "scheming",
         "sandbagging"),
    ),
    "safety_evaluation.fairness_bias": (
        "Fairness & Bias Evaluations (incl. BBQ)",
        ("fairness and bias evaluations", "bias evaluations", "fairness evaluations", "bbq",
         "stereotype benchmarks", "demographic bias", "disparity analysis"),
    ),
    "safety_evaluation.adversarial_robustness": (
        "Adversarial Robustness",
        ("adversarial robustness", "adversarial attacks", "robustness", "adversarial testing",
         "adversarial examples"),
    ),
    "safety_evaluation.red_teaming": (
        "Red Teaming Results",
        ("red teaming results", "red teaming", "red team", "red teaming exercises",
         "external red teaming"),
    ),
    "risk_mitigations.risk_mitigation": (
        "Risk Mitigation",
        ("risk mitigation", "risk mitigations", "mitigations", "safeguards", "safety measures",
         "guardrails", "safety mitigations"),
    ),
}

# Attributes rubric-field concepts to a corpus category for presence analytics.
# Fields without a sensible category (release dates, token limits, ...) stay out.
CATEGORY_ROLLUP: dict[str, str] = {
    "model_details.architecture": "category.model_architecture",
    "model_data.training_dataset": "category.training_data",
    "model_data.training_data_processing": "category.training_data",
    "model_data.knowledge_count": "category.training_data",
    "implementation_sustainability.hardware": "category.compute_requirements",
    "intended_use.primary_uses": "category.intended_use",
    "intended_use.primary_users": "category.intended_use",
    "intended_use.out_of_scope": "category.out_of_scope_use",
    "critical_risk.cbrn": "category.safety_evaluation",
    "critical_risk.cyber_risk": "category.safety_evaluation",
    "critical_risk.harmful_manipulation": "category.safety_evaluation",
    "critical_risk.child_safety": "category.safety_evaluation",
    "critical_risk.privacy_risks": "category.safety_evaluation",
    "safety_evaluation.refusals": "category.safety_evaluation",
    "safety_evaluation.disallowed_content": "category.safety_evaluation",
    "safety_evaluation.sycophancy": "category.safety_evaluation",
    "safety_evaluation.jailbreak": "category.safety_evaluation",
    "safety_evaluation.hallucinations": "category.safety_evaluation",
    "safety_evaluation.deception_behaviors": "category.safety_evaluation",
    "safety_evaluation.fairness_bias": "category.bias_fairness",
    "safety_evaluation.adversarial_robustness": "category.safety_evaluation",
    "safety_evaluation.red_teaming": "category.safety_evaluation",
}

# Search and relevance keywords per rubric field; matching is case-insensitive
# substring containment, so singular forms cover plurals.
SUBSECTION_KEYWORDS: dict[str, tuple[str, ...]] = {
    "model_details.model_overview": ("overview", "description", "summary", "capabilities"),
    "model_details.organization": ("developed by", "organization", "developer", "team"),
    "model_details.model_version": ("version", "checkpoint", "release"),
    "model_details.release_date": ("release date", "released on", "launch date", "available since"),
    "model_details.version_progression": ("changelog", "version history", "improvements over", "previous version"),
    "model_details.architecture": ("architecture", "parameters", "transformer", "layers", "mixture of experts"),
    "model_details.dependencies": ("based on", "fine-tuned from", "dependencies", "built on", "derived from"),
    "model_details.paper_links": ("paper", "technical report", "arxiv", "repository"),
    "model_details.distribution_forms": ("api", "open weights", "download", "availability", "distribution"),
    "inputs_outputs.inputs": ("input", "accepts", "prompt format", "modalities"),
    "inputs_outputs.outputs": ("output", "generates", "response format"),
    "inputs_outputs.token_count": ("context window", "token limit", "tokens", "context length"),
    "model_data.training_dataset": ("training data", "dataset", "corpus", "pretraining", "trained on"),
    "model_data.training_data_processing": ("filtering", "deduplication", "data cleaning", "preprocessing", "curation"),
    "model_data.knowledge_count": ("knowledge cutoff", "cutoff date", "data freshness", "up to date as of"),
    "implementation_sustainability.hardware": ("gpu", "tpu", "hardware", "accelerator", "cluster"),
    "implementation_sustainability.software_frameworks": ("framework", "pytorch", "jax", "software stack", "tooling"),
    "implementation_sustainability.energy_use": ("energy", "carbon", "emissions", "sustainability", "power consumption"),
    "intended_use.primary_uses": ("intended use", "use cases", "designed for", "applications"),
    "intended_use.primary_users": ("intended users", "audience", "for developers", "for researchers"),
    "intended_use.out_of_scope": ("out of scope", "not intended", "should not be used", "prohibited"),
    "critical_risk.cbrn": ("cbrn", "biological", "chemical", "nuclear", "radiological", "bioweapon"),
    "critical_risk.cyber_risk": ("cyber", "exploit", "vulnerability", "hacking", "capture the flag"),
    "critical_risk.harmful_manipulation": ("manipulation", "persuasion", "influence", "deceptive content"),
    "critical_risk.child_safety": ("child safety", "csam", "minors", "child sexual"),
    "critical_risk.privacy_risks": ("privacy", "personal data", "pii", "memorization"),
    "safety_evaluation.refusals": ("refusal", "refuse", "over-refusal", "declined"),
    "safety_evaluation.disallowed_content": ("disallowed", "prohibited content", "content policy", "harmful content"),
    "safety_evaluation.sycophancy": ("sycophancy", "sycophantic", "agreement bias"),
    "safety_evaluation.jailbreak": ("jailbreak", "prompt injection", "bypass", "adversarial prompt"),
    "safety_evaluation.hallucinations": ("hallucination", "factuality", "factual accuracy", "confabulation"),
    "safety_evaluation.deception_behaviors": ("deception", "deceptive", "scheming", "honesty", "sandbagging"),
    "safety_evaluation.fairness_bias": ("bias", "fairness", "bbq", "demographic", "stereotype"),
    "safety_evaluation.adversarial_robustness": ("adversarial robustness", "robustness", "perturbation", "adversarial attack"),
    "safety_evaluation.red_teaming": ("red team", "red-teaming", "red teaming", "external testing"),
    "risk_mitigations.risk_mitigation": ("mitigation", "safeguard", "safety measures", "guardrail", "filtering"),
}
