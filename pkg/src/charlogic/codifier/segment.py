"""Split a textual character profile into segments.

Three granularities: SECTION groups paragraphs under heading lines,
PARAGRAPH splits on blank-line runs, SENTENCE further splits paragraphs
on terminal punctuation. Sentence splitting is deliberately
conservative: it never splits inside double quotes or after a protected
abbreviation, preferring an occasional merged sentence over a broken
one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path


class Granularity(Enum):
    SECTION = "section"
    PARAGRAPH = "paragraph"
    SENTENCE = "sentence"


@dataclass(frozen=True)
class Segment:
    id: str
    text: str
    granularity: Granularity
    index: int


@dataclass(frozen=True)
class Profile:
    character: str
    artifact: str
    text: str
    segments: tuple[Segment, ...] = ()


def load_profile(path: str | Path,
                 granularity: Granularity = Granularity.PARAGRAPH) -> Profile:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    text = raw["text"]
    return Profile(
        character=raw["character"],
        artifact=raw.get("artifact", ""),
        text=text,
        segments=tuple(segment_profile(text, granularity)),
    )


# words that end in '.' without ending a sentence
ABBREVIATIONS = frozenset({
    "Dr.", "Mr.", "Mrs.", "Ms.", "Prof.", "St.", "Sr.", "Jr.", "Rev.",
    "Gen.", "Col.", "Capt.", "Sgt.", "Lt.", "Cmdr.", "Mt.", "Ft.", "No.",
    "Fig.", "vs.", "etc.", "e.g.", "i.e.", "cf.", "al.", "approx.",
})

_HEADING_CAPS = re.compile(r"[A-Z][A-Z0-9 \-:']{0,58}")


def segment_profile(text: str, granularity: Granularity) -> list[Segment]:
    if granularity is Granularity.PARAGRAPH:
        chunks = _paragraphs(text)
    elif granularity is Granularity.SECTION:
        chunks = _sections(text)
    elif granularity is Granularity.SENTENCE:
        chunks = [s for para in _paragraphs(text)
                  for s in split_sentences(para)]
    else:
        raise ValueError(f"unknown granularity: {granularity!r}")
    return [Segment(f"s{i}", chunk, granularity, i)
            for i, chunk in enumerate(chunks)]


def _paragraphs(text: str) -> list[str]:
    return [p.strip() for p in re.split(r"\n\s*\n", text) if p.strip()]


def _is_heading(line: str) -> bool:
    stripped = line.strip()
    if not stripped:
        return False
    if stripped.startswith("#"):
        return True
    if stripped.startswith("==") and stripped.endswith("=="):
        return True
    return (_HEADING_CAPS.fullmatch(stripped) is not None
            and not stripped.endswith("."))


def _sections(text: str) -> list[str]:
    sections: list[list[str]] = []
    current: list[str] = []
    for line in text.split("\n"):
        if _is_heading(line):
            if any(l.strip() for l in current):
                sections.append(current)
            current = [line]
        else:
            current.append(line)
    if any(l.strip() for l in current):
        sections.append(current)
    return [s for s in ("\n".join(sec).strip() for sec in sections) if s]


def split_sentences(paragraph: str) -> list[str]:
    """Terminal punctuation + whitespace + uppercase letter, except inside
    double quotes and after protected abbreviations."""
    text = paragraph.strip()
    boundaries: list[int] = []
    straight_open = False
    curly_depth = 0
    for i, ch in enumerate(text):
        if ch == '"':
            straight_open = not straight_open
            continue
        if ch == "“":
            curly_depth += 1
            continue
        if ch == "”":
            curly_depth = max(0, curly_depth - 1)
            continue
        if ch not in ".!?" or straight_open or curly_depth:
            continue
        j = i + 1
        if j >= len(text) or not text[j].isspace():
            continue
        while j < len(text) and text[j].isspace():
            j += 1
        if j >= len(text) or not text[j].isupper():
            continue
        if ch == "." and _ends_with_abbreviation(text, i):
            continue
        boundaries.append(i + 1)
    parts = []
    start = 0
    for cut in boundaries:
        parts.append(text[start:cut].strip())
        start = cut
    parts.append(text[start:].strip())
    return [p for p in parts if p]


def _ends_with_abbreviation(text: str, dot_index: int) -> bool:
    match = re.search(r"(\S+)$", text[:dot_index + 1])
    if match is None:
        return False
    word = match.group(1)
    if word in ABBREVIATIONS or word.lower() in ABBREVIATIONS:
        return True
    # single-letter initials: "J. Smith"
    return bool(re.fullmatch(r"[A-Z]\.", word))
