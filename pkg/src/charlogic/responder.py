"""Compose the character's next action from a scene plus grounding.

Grounding varies by mode: VANILLA sends the bare scene, TEXTUAL attaches
the raw profile, CODIFIED/CODIFIED_RAG attach the statements fired by
the profile programs, ENSEMBLE attaches statements first and the profile
text after. An optional chain-of-thought pass reasons under an explicit
step budget before the final reply.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .dsl.ast import Program
from .engine.interpreter import execute_profile
from .engine.types import (
    ConditionOracle, RunSeed, Scene, TraceEvent, TriggeredStatement,
)
from .llm.client import GenerationConfig, LlmClient
from .llm.templates import PromptTemplate, load_template

log = logging.getLogger(__name__)


class Mode(Enum):
    VANILLA = "vanilla"
    TEXTUAL = "textual"
    CODIFIED = "codified"
    CODIFIED_RAG = "codified_rag"
    ENSEMBLE = "ensemble"


_PROGRAM_MODES = (Mode.CODIFIED, Mode.CODIFIED_RAG, Mode.ENSEMBLE)
_TEXT_MODES = (Mode.TEXTUAL, Mode.ENSEMBLE)


@dataclass(frozen=True)
class Grounding:
    """Mode-specific inputs for one response."""
    mode: Mode
    character: str
    programs: tuple[Program, ...] = ()
    profile_text: str = ""

    def __post_init__(self):
        if self.mode in _PROGRAM_MODES and not self.programs:
            raise ValueError(f"{self.mode.value} grounding needs programs")
        if self.mode in _TEXT_MODES and not self.profile_text:
            raise ValueError(f"{self.mode.value} grounding needs profile text")


@dataclass(frozen=True)
class ResponseRecord:
    scene_id: str
    mode: Mode
    response: str
    reasoning: str | None
    cot_budget: int
    triggered: tuple[TriggeredStatement, ...]
    forward_passes: int
    trace: tuple[TraceEvent, ...] = ()
    run_index: int = 0

    def __post_init__(self):
        if (self.reasoning is not None) != (self.cot_budget > 0):
            raise ValueError("reasoning present iff cot_budget > 0")


class Responder:
    def __init__(self, llm: LlmClient, oracle: ConditionOracle | None = None,
                 generation: GenerationConfig | None = None,
                 cot_budget: int = 0):
        self.llm = llm
        self.oracle = oracle
        self.generation = generation or GenerationConfig("", temperature=0.0)
        self.cot_budget = cot_budget
        self._role_play = load_template("role_play")
        self._cot = load_template("cot")

    def respond(self, scene: Scene, grounding: Grounding,
                seed: RunSeed | None = None, run_index: int = 0,
                ) -> ResponseRecord:
        passes_before = self.llm.thread_forward_passes
        triggered: list[TriggeredStatement] = []
        trace: list[TraceEvent] = []
        if grounding.mode in _PROGRAM_MODES:
            if self.oracle is None:
                raise ValueError(
                    f"{grounding.mode.value} mode needs a condition oracle")
            if seed is None:
                seed = RunSeed(0, scene.id, run_index)
            triggered, trace = execute_profile(
                list(grounding.programs), scene, self.oracle, seed)
        block = _grounding_block(grounding, triggered)
        question_block = (f"Guiding question: {scene.question}\n"
                          if scene.question else "")
        reasoning: str | None = None
        if self.cot_budget > 0:
            cot_exchange = self.llm.complete(self._cot, {
                "character": grounding.character,
                "scene": scene.context,
                "grounding": block,
                "question_block": question_block,
                "budget": str(self.cot_budget),
            }, self.generation)
            reasoning = cot_exchange.completion.strip()
            block = block + f"Your reasoning about this scene:\n{reasoning}\n"
        exchange = self.llm.complete(self._role_play, {
            "character": grounding.character,
            "scene": scene.context,
            "grounding": block,
            "question_block": question_block,
        }, self.generation)
        return ResponseRecord(
            scene_id=scene.id,
            mode=grounding.mode,
            response=exchange.completion.strip(),
            reasoning=reasoning,
            cot_budget=self.cot_budget,
            triggered=tuple(triggered),
            forward_passes=self.llm.thread_forward_passes - passes_before,
            trace=tuple(trace),
            run_index=run_index,
        )

    def respond_stochastic(self, scene: Scene, grounding: Grounding,
                           k: int, base_seed: int) -> list[ResponseRecord]:
        if k < 1:
            raise ValueError("k must be >= 1")
        if grounding.mode is not Mode.CODIFIED:
            raise ValueError("stochastic responses need CODIFIED grounding")
        if self.generation.temperature > 0.7:
            raise ValueError("stochastic generation temperature must be "
                             "<= 0.7 for quality")
        records = []
        for run_index in range(k):
            seed = RunSeed(base_seed, scene.id, run_index)
            records.append(self.respond(scene, grounding, seed, run_index))
        return records


def _grounding_block(grounding: Grounding,
                     triggered: list[TriggeredStatement]) -> str:
    parts: list[str] = []
    if grounding.mode in _PROGRAM_MODES:
        lines: list[str] = []
        seen: set[str] = set()
        for stmt in triggered:
            if stmt.text in seen:
                continue  # prompt economy; the record keeps duplicates
            seen.add(stmt.text)
            lines.append(f"- {stmt.text}")
        if lines:
            parts.append(
                f"Statements from {grounding.character}'s profile logic "
                "that fired for this scene:\n" + "\n".join(lines) + "\n")
        else:
            parts.append("No profile rule fired for this scene.\n")
    if grounding.mode in _TEXT_MODES:
        parts.append(f"{grounding.character}'s profile:\n"
                     f"{grounding.profile_text}\n")
    return "".join(parts)
