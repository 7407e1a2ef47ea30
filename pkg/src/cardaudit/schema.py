"""Weighted transparency rubric: types, validation, and the JSON wire format.

Weights are percentage points held as integer tenths so that every sum check
is exact integer arithmetic. The JSON form serializes weights (and credit
fractions) as decimal strings such as "0.5" and "15.0"; unknown fields are
carried through round trips untouched.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterator

__all__ = [
    "CreditPolicy",
    "Framework",
    "FrameworkParseError",
    "FrameworkValidationError",
    "Section",
    "Subsection",
    "Violation",
    "format_tenths",
    "load_framework",
    "parse_framework",
    "parse_weight_tenths",
    "serialize_framework",
    "validate_framework",
]


class FrameworkParseError(ValueError):
    """The document is not syntactically a framework."""


class FrameworkValidationError(ValueError):
    """A structurally valid document violates a framework invariant."""


_DECIMAL_RE = re.compile(r"-?\d+(?:\.\d+)?")


def parse_weight_tenths(value: Any) -> int:
    """Parse a percentage weight into integer tenths.

    Accepts ints, floats, and decimal strings with at most one significant
    decimal place ("3", "3.0", "0.5"). Finer precision is rejected rather
    than rounded.
    """
    if isinstance(value, bool):
        raise FrameworkParseError(f"weight must be a number or decimal string, got {value!r}")
    if isinstance(value, int):
        return value * 10
    if isinstance(value, float):
        value = repr(value)
    if not isinstance(value, str):
        raise FrameworkParseError(f"weight must be a number or decimal string, got {value!r}")
    s = value.strip()
    if not _DECIMAL_RE.fullmatch(s):
        raise FrameworkParseError(f"weight is not a decimal number: {value!r}")
    whole, _, frac = s.partition(".")
    frac = frac.rstrip("0")
    if len(frac) > 1:
        raise FrameworkParseError(f"weight {s!r} has more than one decimal place")
    sign = -1 if whole.lstrip().startswith("-") else 1
    tenths = abs(int(whole)) * 10 + (int(frac) if frac else 0)
    return sign * tenths


def format_tenths(tenths: int) -> str:
    """Render integer tenths as a decimal string, always one decimal place."""
    sign = "-" if tenths < 0 else ""
    t = abs(tenths)
    return f"{sign}{t // 10}.{t % 10}"


# ── Types ────────────────────────────────────────────────────────────────────


@dataclass(frozen=True, slots=True)
class Subsection:
    """One scored field of the rubric."""

    id: str
    title: str
    weight_tenths: int
    criteria_prompt: str = ""
    extras: tuple[tuple[str, Any], ...] = ()

    @property
    def weight_pct(self) -> float:
        return self.weight_tenths / 10


@dataclass(frozen=True, slots=True)
class Section:
    id: str
    title: str
    weight_tenths: int
    subsections: tuple[Subsection, ...]
    extras: tuple[tuple[str, Any], ...] = ()

    @property
    def weight_pct(self) -> float:
        return self.weight_tenths / 10


@dataclass(frozen=True, slots=True)
class CreditPolicy:
    """Credit tenths granted per completeness label (10 tenths == full credit)."""

    absent_tenths: int = 0
    mentioned_tenths: int = 5
    detailed_tenths: int = 10


@dataclass(frozen=True, slots=True)
class Framework:
    version: str
    sections: tuple[Section, ...]
    credits: CreditPolicy = CreditPolicy()
    extras: tuple[tuple[str, Any], ...] = ()

    def iter_subsections(self) -> Iterator[tuple[Section, Subsection]]:
        for section in self.sections:
            for sub in section.subsections:
                yield section, sub

    def subsections(self) -> tuple[Subsection, ...]:
        return tuple(sub for _, sub in self.iter_subsections())

    def find_subsection(self, subsection_id: str) -> Subsection:
        for _, sub in self.iter_subsections():
            if sub.id == subsection_id:
                return sub
        raise KeyError(subsection_id)

    def total_weight_tenths(self) -> int:
        return sum(s.weight_tenths for s in self.sections)


@dataclass(frozen=True, slots=True)
class Violation:
    """One failed invariant, naming the offending path and the expectation."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


# ── Parsing ──────────────────────────────────────────────────────────────────

_FRAMEWORK_KEYS = frozenset({"version", "sections", "credits"})
_SECTION_KEYS = frozenset({"id", "title", "weight", "subsections"})
_SUBSECTION_KEYS = frozenset({"id", "title", "weight", "criteria"})
_CREDIT_KEYS = ("absent", "mentioned", "detailed")


def _extras(data: dict[str, Any], known: frozenset[str]) -> tuple[tuple[str, Any], ...]:
    return tuple((k, v) for k, v in data.items() if k not in known)


def _require_str(data: dict[str, Any], key: str, where: str) -> str:
    value = data.get(key, "")
    if not isinstance(value, str):
        raise FrameworkParseError(f"{where}: {key!r} must be a string, got {type(value).__name__}")
    return value


def _subsection_from_dict(data: Any, where: str) -> Subsection:
    if not isinstance(data, dict):
        raise FrameworkParseError(f"{where} must be an object")
    return Subsection(
        id=_require_str(data, "id", where),
        title=_require_str(data, "title", where),
        weight_tenths=parse_weight_tenths(data.get("weight", "0")),
        criteria_prompt=_require_str(data, "criteria", where),
        extras=_extras(data, _SUBSECTION_KEYS),
    )


def _section_from_dict(data: Any, where: str) -> Section:
    if not isinstance(data, dict):
        raise FrameworkParseError(f"{where} must be an object")
    raw_subs = data.get("subsections", [])
    if not isinstance(raw_subs, list):
        raise FrameworkParseError(f"{where}: 'subsections' must be a list")
    subs = tuple(
        _subsection_from_dict(raw, f"{where}.subsections[{i}]") for i, raw in enumerate(raw_subs)
    )
    return Section(
        id=_require_str(data, "id", where),
        title=_require_str(data, "title", where),
        weight_tenths=parse_weight_tenths(data.get("weight", "0")),
        subsections=subs,
        extras=_extras(data, _SECTION_KEYS),
    )


def _credits_from_dict(data: Any) -> CreditPolicy:
    if data is None:
        return CreditPolicy()
    if not isinstance(data, dict):
        raise FrameworkParseError("'credits' must be an object")
    tenths = [parse_weight_tenths(data.get(k, d)) for k, d in zip(_CREDIT_KEYS, ("0.0", "0.5", "1.0"))]
    return CreditPolicy(*tenths)


def framework_from_dict(data: Any) -> Framework:
    if not isinstance(data, dict):
        raise FrameworkParseError("framework document must be a JSON object")
    raw_sections = data.get("sections", [])
    if not isinstance(raw_sections, list):
        raise FrameworkParseError("'sections' must be a list")
    sections = tuple(
        _section_from_dict(raw, f"sections[{i}]") for i, raw in enumerate(raw_sections)
    )
    return Framework(
        version=_require_str(data, "version", "framework"),
        sections=sections,
        credits=_credits_from_dict(data.get("credits")),
        extras=_extras(data, _FRAMEWORK_KEYS),
    )


def parse_framework(text: str) -> Framework:
    """Parse framework JSON without enforcing invariants (see validate_framework)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameworkParseError(f"framework document is not valid JSON: {exc}") from exc
    return framework_from_dict(data)


def framework_to_dict(framework: Framework) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "version": framework.version,
        "credits": {
            "absent": format_tenths(framework.credits.absent_tenths),
            "mentioned": format_tenths(framework.credits.mentioned_tenths),
            "detailed": format_tenths(framework.credits.detailed_tenths),
        },
        "sections": [
            {
                "id": section.id,
                "title": section.title,
                "weight": format_tenths(section.weight_tenths),
                "subsections": [
                    {
                        "id": sub.id,
                        "title": sub.title,
                        "weight": format_tenths(sub.weight_tenths),
                        "criteria": sub.criteria_prompt,
                        **dict(sub.extras),
                    }
                    for sub in section.subsections
                ],
                **dict(section.extras),
            }
            for section in framework.sections
        ],
    }
    doc.update(dict(framework.extras))
    return doc


def serialize_framework(framework: Framework) -> str:
    return json.dumps(framework_to_dict(framework), ensure_ascii=False, indent=2) + "\n"


# ── Validation ───────────────────────────────────────────────────────────────


def validate_framework(framework: Framework) -> list[Violation]:
    """Check every framework invariant; returns all violations in document order."""
    out: list[Violation] = []
    if not framework.version:
        out.append(Violation("version", "version must be a non-empty string"))
    if not framework.sections:
        out.append(Violation("sections", "framework must contain at least one section"))

    seen_sections: dict[str, str] = {}
    seen_subsections: dict[str, str] = {}
    for i, section in enumerate(framework.sections):
        path = f"sections[{i}]"
        if not section.id:
            out.append(Violation(path, "section id must be non-empty"))
        elif section.id in seen_sections:
            out.append(Violation(path, f"duplicate section id '{section.id}'"))
        else:
            seen_sections[section.id] = path
        if section.weight_tenths <= 0:
            out.append(
                Violation(
                    f"{path}.weight",
                    f"section weight must be positive, got {format_tenths(section.weight_tenths)}",
                )
            )
        if not section.subsections:
            out.append(Violation(path, f"section '{section.id}' must contain at least one subsection"))
        for j, sub in enumerate(section.subsections):
            sub_path = f"{path}.subsections[{j}]"
            if not sub.id:
                out.append(Violation(sub_path, "subsection id must be non-empty"))
            elif sub.id in seen_subsections:
                out.append(
                    Violation(sub_path, f"duplicate subsection id '{sub.id}' (also at {seen_subsections[sub.id]})")
                )
            else:
                seen_subsections[sub.id] = sub_path
            if sub.weight_tenths <= 0:
                out.append(
                    Violation(
                        f"{sub_path}.weight",
                        f"subsection weight must be positive, got {format_tenths(sub.weight_tenths)}",
                    )
                )
        sub_sum = sum(s.weight_tenths for s in section.subsections)
        if section.subsections and sub_sum != section.weight_tenths:
            out.append(
                Violation(
                    path,
                    f"subsection weights for '{section.id}' sum to {format_tenths(sub_sum)}, "
                    f"expected {format_tenths(section.weight_tenths)}",
                )
            )

    total = framework.total_weight_tenths()
    if framework.sections and total != 1000:
        out.append(
            Violation("sections", f"section weights sum to {format_tenths(total)}, expected 100.0")
        )

    credits = framework.credits
    if not 0 <= credits.absent_tenths <= credits.mentioned_tenths <= credits.detailed_tenths <= 10:
        out.append(
            Violation(
                "credits",
                "credit fractions must satisfy 0 <= absent <= mentioned <= detailed <= 1,"
                f" got {format_tenths(credits.absent_tenths)}/"
                f"{format_tenths(credits.mentioned_tenths)}/"
                f"{format_tenths(credits.detailed_tenths)}",
            )
        )
    return out


def load_framework(text: str) -> Framework:
    """Parse and validate; raises on the first failed invariant."""
    framework = parse_framework(text)
    violations = validate_framework(framework)
    if violations:
        raise FrameworkValidationError(str(violations[0]))
    return framework
