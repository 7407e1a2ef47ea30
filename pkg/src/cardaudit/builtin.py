"""The built-in transparency rubric that ships with the package.

Eight sections, 36 scored subsections, weights in percentage points summing
to exactly 100. Safety-critical disclosure carries the bulk of the weight.
Each subsection has a criteria prompt used both as judging guidance for LLM
panels and as documentation of what "detailed" means for that field.
"""

from __future__ import annotations

from .schema import Framework, Section, Subsection, parse_weight_tenths

BUILTIN_VERSION = "1.0.0"

# (section id, section title, section weight, subsections)
# (subsection id suffix, title, weight, criteria prompt)
_TABLE: tuple[tuple[str, str, str, tuple[tuple[str, str, str, str], ...]], ...] = (
    (
        "model_details",
        "Model Details",
        "15",
        (
            (
                "model_overview",
                "Model overview",
                "3",
                "A concise statement of what the model is and does. Detailed covers "
                "capability class, modality, and scale; a one-line tagline is only a mention.",
            ),
            (
                "organization",
                "Organization developing the model",
                "1",
                "Who built the model. Detailed names the developing organization and how to "
                "attribute or contact it; a bare company name is a mention.",
            ),
            (
                "model_version",
                "Model Version",
                "2",
                "The precise version or checkpoint identifier being documented and how it is "
                "distinguished from sibling releases.",
            ),
            (
                "release_date",
                "Model Release Date",
                "0.5",
                "When this version was released. A full date is detailed; a year alone or "
                "'recently' is a mention.",
            ),
            (
                "version_progression",
                "Model Version Progression",
                "1",
                "What changed relative to prior versions: capability, data, or safety deltas, "
                "not just a version list.",
            ),
            (
                "architecture",
                "Model Architecture",
                "4",
                "Structural specifics: architecture family, parameter count, context length, "
                "routing or attention choices. Concrete numbers make this detailed.",
            ),
            (
                "dependencies",
                "Model Dependencies",
                "1",
                "Upstream models, adapters, or third-party components this model builds on, "
                "including base checkpoints for fine-tunes.",
            ),
            (
                "paper_links",
                "Paper and relevant links",
                "0.5",
                "Pointers to papers, technical reports, or repositories documenting the model.",
            ),
            (
                "distribution_forms",
                "Model Distribution Forms",
                "2",
                "How the model is distributed: API, open weights, hosted app, on-device, and "
                "any access gating or regional limits.",
            ),
        ),
    ),
    (
        "inputs_outputs",
        "Model Inputs & Outputs",
        "6",
        (
            (
                "inputs",
                "Inputs",
                "2",
                "Accepted input modalities and formats, with size or format limits where relevant.",
            ),
            (
                "outputs",
                "Outputs",
                "2",
                "Produced output modalities and formats, including any structured output modes.",
            ),
            (
                "token_count",
                "Token Count",
                "2",
                "Context window and output token limits, stated numerically.",
            ),
        ),
    ),
    (
        "model_data",
        "Model Data",
        "15",
        (
            (
                "training_dataset",
                "Training Dataset",
                "7",
                "What the model was trained on: sources, composition, size, collection windows. "
                "Named sources and quantities are detailed; 'web data' alone is a mention.",
            ),
            (
                "training_data_processing",
                "Training Data Processing",
                "6",
                "How training data was filtered, cleaned, deduplicated, or weighted, including "
                "consent, licensing, and copyright handling.",
            ),
            (
                "knowledge_count",
                "Knowledge Count",
                "2",
                "Stated bounds on what the model knows: knowledge cutoff date or corpus volume figures.",
            ),
        ),
    ),
    (
        "implementation_sustainability",
        "Model Implementation and Sustainability",
        "5",
        (
            (
                "hardware",
                "Hardware Used During Training & Inference",
                "2",
                "Hardware used to train and serve: accelerator type and count, cluster scale, "
                "serving footprint.",
            ),
            (
                "software_frameworks",
                "Software Frameworks & Tooling",
                "2",
                "Software stack used to train or serve the model: frameworks, libraries, "
                "orchestration tooling.",
            ),
            (
                "energy_use",
                "Energy Use / Sustainability Metrics",
                "1",
                "Energy, compute, or emissions figures for training or inference, or a stated "
                "sustainability methodology.",
            ),
        ),
    ),
    (
        "intended_use",
        "Intended Use",
        "10",
        (
            (
                "primary_uses",
                "Primary intended uses",
                "5",
                "The use cases the model is built and supported for. Concrete scenarios and "
                "deployment surfaces are detailed; 'general purpose assistant' is a mention.",
            ),
            (
                "primary_users",
                "Primary intended users",
                "2",
                "Who the model is for: audiences, skill levels, sectors.",
            ),
            (
                "out_of_scope",
                "Out-of-scope use cases",
                "3",
                "Uses the developer disclaims or advises against, with reasons where given.",
            ),
        ),
    ),
    (
        "critical_risk",
        "Critical Risk",
        "20",
        (
            (
                "cbrn",
                "CBRN (Chemical, Biological, Radiological or Nuclear)",
                "5",
                "Evaluation of chemical, biological, radiological, and nuclear misuse potential: "
                "named evaluations, capability thresholds, and results, not just a policy statement.",
            ),
            (
                "cyber_risk",
                "Cyber Risk",
                "5",
                "Offensive-cyber capability testing: exploit development, vulnerability discovery, "
                "or capture-the-flag style benchmarks with results.",
            ),
            (
                "harmful_manipulation",
                "Harmful Manipulation",
                "4",
                "Assessment of persuasion or manipulation capability and the safeguards against it.",
            ),
            (
                "child_safety",
                "Child Safety Evaluations",
                "4",
                "Evaluations and protections specific to minors: abuse-material handling, "
                "age-inappropriate content testing, reporting pipelines.",
            ),
            (
                "privacy_risks",
                "Privacy Risks",
                "2",
                "Risks of personal-data leakage or inference, including memorization or "
                "extraction testing.",
            ),
        ),
    ),
    (
        "safety_evaluation",
        "Safety Evaluation",
        "25",
        (
            (
                "refusals",
                "Refusals",
                "1",
                "Refusal behavior on policy-violating requests, ideally with measured refusal "
                "and over-refusal rates.",
            ),
            (
                "disallowed_content",
                "Disallowed Content Handling",
                "4",
                "How disallowed content categories are defined and enforced, with evaluation results.",
            ),
            (
                "sycophancy",
                "Sycophancy",
                "2",
                "Testing for agreement-with-user bias under pressure, with measured rates where available.",
            ),
            (
                "jailbreak",
                "Jailbreak",
                "4",
                "Resistance to jailbreaks and prompt injection: attack suites used, bypass rates, "
                "mitigations. Named suites or numbers are detailed.",
            ),
            (
                "hallucinations",
                "Hallucinations",
                "4",
                "Factuality and hallucination measurement: benchmarks, rates, mitigation strategies.",
            ),
            (
                "deception_behaviors",
                "Deception Behaviors",
                "4",
                "Evaluation of deceptive or scheming behavior, including honesty probes or "
                "sandbagging tests.",
            ),
            (
                "fairness_bias",
                "Fairness & Bias Evaluations (incl. BBQ)",
                "3",
                "Bias and fairness evaluations across demographic groups. The title cites one "
                "benchmark family without defining required coverage, so any recognized fairness "
                "benchmark with reported results qualifies as detailed.",
            ),
            (
                "adversarial_robustness",
                "Adversarial Robustness",
                "2",
                "Robustness under adversarial inputs beyond jailbreaks: perturbations, encoding "
                "tricks, stress suites.",
            ),
            (
                "red_teaming",
                "Red Teaming Results",
                "1",
                "Internal or external red-team campaigns: scope, methods, findings.",
            ),
        ),
    ),
    (
        "risk_mitigations",
        "Risk Mitigations",
        "4",
        (
            (
                "risk_mitigation",
                "Risk Mitigation",
                "4",
                "Safeguards deployed to reduce identified risks: filtering layers, policy "
                "enforcement, monitoring, incident response.",
            ),
        ),
    ),
)


def builtin_framework() -> Framework:
    """Construct the built-in rubric. Repeated calls return equal values."""
    sections = []
    for section_id, section_title, section_weight, subs in _TABLE:
        subsections = tuple(
            Subsection(
                id=f"{section_id}.{suffix}",
                title=title,
                weight_tenths=parse_weight_tenths(weight),
                criteria_prompt=prompt,
            )
            for suffix, title, weight, prompt in subs
        )
        sections.append(
            Section(
                id=section_id,
                title=section_title,
                weight_tenths=parse_weight_tenths(section_weight),
                subsections=subsections,
            )
        )
    return Framework(version=BUILTIN_VERSION, sections=tuple(sections))
