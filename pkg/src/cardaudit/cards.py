"""Model card parsing: frontmatter, heading-delimited sections, reconstruction.

The parser never hard-fails on messy input. Anything it cannot interpret is
kept as body text and, where relevant, noted as a parse warning. Every parse
preserves enough raw text that reconstruct() returns the input byte for byte:

    frontmatter block + (raw heading + body) per section == original text

Section boundaries are ATX headings (# through ######) at column zero.
Setext-underlined headings are recognized and normalized to depth 1/2 while
their original source lines are kept as the raw heading. Lines inside fenced
code blocks never open sections. HTML heading tags stay body text and are
recorded as warnings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "CardSection",
    "ModelCardDocument",
    "extract_section_names",
    "iter_card_paths",
    "load_card",
    "load_corpus",
    "parse_card",
    "section_subtree_text",
]

_ATX_RE = re.compile(r"(#{1,6})(?:[ \t]+(.*))?$")
_SETEXT_RE = re.compile(r"(=+|-+)[ \t]*$")
_FENCE_RE = re.compile(r"(`{3,}|~{3,})")
_HTML_HEADING_RE = re.compile(r"<h[1-6][\s>/]", re.IGNORECASE)

# A line cannot supply setext heading text if it opens a list, quote, fence,
# another heading, or is indented; keeps "- item" followed by "---" as body.
_SETEXT_INELIGIBLE = set("#->*+`~= \t")


@dataclass(frozen=True, slots=True)
class CardSection:
    heading_text: str
    depth: int
    body_text: str
    char_count: int
    raw_heading: str = ""

    @property
    def is_preamble(self) -> bool:
        return self.depth == 0


@dataclass(frozen=True, slots=True)
class ModelCardDocument:
    source_id: str
    metadata: tuple[tuple[str, str], ...]
    sections: tuple[CardSection, ...]
    raw_text: str
    frontmatter_block: str = ""
    warnings: tuple[str, ...] = ()

    def metadata_map(self) -> dict[str, str]:
        return dict(self.metadata)

    def reconstruct(self) -> str:
        parts = [self.frontmatter_block]
        for section in self.sections:
            parts.append(section.raw_heading)
            parts.append(section.body_text)
        return "".join(parts)


def _strip_eol(line: str) -> str:
    return line.rstrip("\r\n")


def _clean_heading(text: str) -> str:
    """Strip whitespace, the ATX closing sequence, and marker residue."""
    text = text.strip()
    text = re.sub(r"[ \t]+#+$", "", text)
    return text.strip().strip("#").strip()


def _parse_frontmatter_lines(lines: list[str]) -> dict[str, str] | None:
    """Flat key: value extraction; None means the block is not frontmatter.

    Indented continuations, list items, and comment lines are tolerated and
    skipped (values stay raw strings, no typed coercion). A top-level line
    without a colon makes the whole block malformed.
    """
    meta: dict[str, str] = {}
    for raw in lines:
        line = _strip_eol(raw)
        if not line.strip():
            continue
        if line[0] in " \t":
            continue
        if line.startswith("#"):
            continue
        if line == "-" or line.startswith("- "):
            continue
        if ":" not in line:
            return None
        key, _, value = line.partition(":")
        key = key.strip()
        if not key:
            return None
        value = value.strip()
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "'\"":
            value = value[1:-1]
        meta[key] = value
    return meta


def parse_card(text: str, source_id: str = "") -> ModelCardDocument:
    lines = text.splitlines(keepends=True)
    warnings: list[str] = []
    metadata: dict[str, str] = {}
    frontmatter_block = ""
    start = 0

    if lines and _strip_eol(lines[0]) == "---":
        close = next((j for j in range(1, len(lines)) if _strip_eol(lines[j]) == "---"), None)
        if close is None:
            warnings.append("unterminated frontmatter delimiter at line 1; kept as body text")
        else:
            parsed = _parse_frontmatter_lines(lines[1:close])
            if parsed is None:
                warnings.append("frontmatter block is not key/value pairs; kept as body text")
            else:
                metadata = parsed
                frontmatter_block = "".join(lines[: close + 1])
                start = close + 1

    sections: list[CardSection] = []
    cur_heading = ""
    cur_depth = 0
    cur_raw = ""
    body: list[str] = []
    opened = False  # a heading has been seen; the preamble is before that

    def flush() -> None:
        body_text = "".join(body)
        if opened or body_text:
            sections.append(
                CardSection(
                    heading_text=cur_heading,
                    depth=cur_depth,
                    body_text=body_text,
                    char_count=len(body_text),
                    raw_heading=cur_raw,
                )
            )

    in_fence = False
    fence_char = ""
    j = start
    while j < len(lines):
        line = lines[j]
        bare = _strip_eol(line)

        if in_fence:
            body.append(line)
            if bare.startswith(fence_char * 3):
                in_fence = False
            j += 1
            continue

        fence = _FENCE_RE.match(bare)
        if fence:
            in_fence = True
            fence_char = fence.group(1)[0]
            body.append(line)
            j += 1
            continue

        atx = _ATX_RE.fullmatch(bare)
        if atx:
            flush()
            cur_heading = _clean_heading(atx.group(2) or "")
            cur_depth = len(atx.group(1))
            cur_raw = line
            body = []
            opened = True
            j += 1
            continue

        if (
            bare.strip()
            and bare[0] not in _SETEXT_INELIGIBLE
            and j + 1 < len(lines)
            and _SETEXT_RE.fullmatch(_strip_eol(lines[j + 1]))
        ):
            underline = _strip_eol(lines[j + 1])
            flush()
            cur_heading = bare.strip()
            cur_depth = 1 if underline.lstrip().startswith("=") else 2
            cur_raw = line + lines[j + 1]
            body = []
            opened = True
            j += 2
            continue

        if _HTML_HEADING_RE.search(bare):
            warnings.append(f"html heading at line {j + 1} treated as body text")
        body.append(line)
        j += 1

    flush()

    return ModelCardDocument(
        source_id=source_id,
        metadata=tuple(metadata.items()),
        sections=tuple(sections),
        raw_text=text,
        frontmatter_block=frontmatter_block,
        warnings=tuple(warnings),
    )


def extract_section_names(doc: ModelCardDocument) -> list[str]:
    """All heading texts in document order, duplicates preserved, preamble excluded."""
    return [s.heading_text for s in doc.sections if s.depth >= 1]


def section_subtree_text(doc: ModelCardDocument, index: int) -> str:
    """Rolled-up view: a section's body plus all deeper sections that follow it.

    Child heading text counts as content. The flat view is the sections tuple
    itself; analytics choose whichever attribution they need.
    """
    root = doc.sections[index]
    parts = [root.body_text]
    for section in doc.sections[index + 1 :]:
        if section.depth <= root.depth:
            break
        parts.append(section.heading_text + "\n" + section.body_text)
    return "".join(parts)


def iter_card_paths(root: Path) -> list[Path]:
    root = Path(root)
    return sorted(root.rglob("*.md"), key=lambda p: p.relative_to(root).as_posix())


def load_card(path: Path, root: Path | None = None) -> ModelCardDocument:
    """Read one card file byte-faithfully (no newline translation)."""
    path = Path(path)
    text = path.read_bytes().decode("utf-8", errors="replace")
    source_id = path.relative_to(root).as_posix() if root is not None else str(path)
    return parse_card(text, source_id=source_id)


def load_corpus(root: Path) -> list[ModelCardDocument]:
    root = Path(root)
    return [load_card(p, root=root) for p in iter_card_paths(root)]
