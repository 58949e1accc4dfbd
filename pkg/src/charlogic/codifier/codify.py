"""Convert profile segments into programs via the codify LLM.

The retry loop is parse-driven: a completion either yields a fenced code
block that parses clean, or the diagnostics are appended to the next
prompt. A segment that exhausts its attempts falls back to the
degenerate retrieval form (one relevance check wrapping the raw text) so
the profile stays fully executable.
"""

from __future__ import annotations

import logging
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..dsl.ast import Check, Diagnostic, If, Literal, Program, Trigger
from ..dsl.formatter import format_program
from ..dsl.parser import parse
from ..errors import CodifyFailed
from ..llm.client import GenerationConfig, LlmClient
from ..llm.templates import PromptTemplate, load_template
from .segment import Granularity, Profile, Segment, segment_profile

log = logging.getLogger(__name__)

_FENCE_RE = re.compile(r"```[A-Za-z0-9_-]*\n(.*?)```", re.DOTALL)

RANDOMNESS_NOTE = (
    "- Where the segment describes probabilistic, occasional, or varied "
    "behavior, you must encode it with chance(p) or choice([...]) rather "
    "than flattening it into fixed behavior."
)


def extract_code_block(completion: str) -> str | None:
    match = _FENCE_RE.search(completion)
    if match is None:
        return None
    code = match.group(1).strip("\n")
    return code + "\n" if code else None


@dataclass(frozen=True)
class CodifiedSegment:
    segment: Segment
    program: Program
    attempts: int
    codify_model: str

    def __post_init__(self):
        if self.program.segment_id != self.segment.id:
            raise ValueError("program.segment_id must match segment.id")
        if self.attempts < 1:
            raise ValueError("attempts must be >= 1")


def _default_config() -> GenerationConfig:
    return GenerationConfig(os.environ.get("CP_LLM_MODEL", ""),
                            temperature=0.0, max_tokens=768)


def codify_segment(segment: Segment, character: str, llm: LlmClient,
                   max_attempts: int = 3, include_randomness: bool = False,
                   config: GenerationConfig | None = None,
                   template: PromptTemplate | None = None) -> CodifiedSegment:
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    config = config or _default_config()
    template = template or load_template("codify")
    feedback = ""
    failures: list[list[Diagnostic]] = []
    for attempt in range(1, max_attempts + 1):
        bindings = {
            "character": character,
            "segment": segment.text,
            "randomness_note": RANDOMNESS_NOTE if include_randomness else "",
            "feedback": feedback,
        }
        exchange = llm.complete(template, bindings, config)
        code = extract_code_block(exchange.completion)
        if code is None:
            diagnostics = [Diagnostic(
                "error", "grammar", 0, 0,
                "completion contains no fenced code block")]
            shown = exchange.completion
        else:
            result = parse(code, segment.id)
            if isinstance(result, Program):
                return CodifiedSegment(segment, result, attempt,
                                       config.model_name)
            diagnostics = result
            shown = code
        failures.append(diagnostics)
        problems = "\n".join(f"- line {d.line}, column {d.column}: "
                             f"{d.message}" for d in diagnostics)
        feedback = (
            "\nYour previous attempt was rejected.\n"
            f"It said:\n{shown}\n"
            f"Problems:\n{problems}\n"
            "Fix these problems and output only the corrected program in "
            "one fenced code block.\n")
    raise CodifyFailed(segment.id, failures)


def rag_fallback_program(segment: Segment) -> Program:
    """The degenerate codification: one relevance check wrapping the raw
    segment text. Also the retrieval baseline's per-segment form."""
    words = segment.text.split()
    head = " ".join(words[:12])
    suffix = "…" if len(words) > 12 else ""
    question = f"Is this relevant: {head}{suffix}?"
    body = (If(Check(question), then=(Trigger(Literal(segment.text)),)),)
    program = Program(segment.id, body)
    return Program(segment.id, body, source_text=format_program(program))


@dataclass
class CodifyRun:
    codified: list[CodifiedSegment]
    failures: list[str] = field(default_factory=list)  # segment ids
    granularity: Granularity = Granularity.PARAGRAPH
    model: str = ""

    @property
    def programs(self) -> list[Program]:
        return [c.program for c in self.codified]


def codify_profile(profile: Profile, llm: LlmClient,
                   granularity: Granularity = Granularity.PARAGRAPH,
                   include_randomness: bool = False,
                   max_attempts: int = 3,
                   config: GenerationConfig | None = None,
                   max_workers: int = 4) -> CodifyRun:
    config = config or _default_config()
    segments = segment_profile(profile.text, granularity)
    run = CodifyRun([], [], granularity, config.model_name)

    def one(segment: Segment) -> CodifiedSegment:
        try:
            return codify_segment(segment, profile.character, llm,
                                  max_attempts, include_randomness, config)
        except CodifyFailed as err:
            log.warning("segment %s failed to codify after %d attempts; "
                        "using retrieval fallback", segment.id,
                        len(err.attempts))
            run.failures.append(segment.id)
            return CodifiedSegment(segment, rag_fallback_program(segment),
                                   max_attempts, config.model_name)

    if len(segments) > 1 and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            run.codified = list(pool.map(one, segments))
    else:
        run.codified = [one(s) for s in segments]
    run.failures.sort()
    return run
