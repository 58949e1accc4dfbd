"""Domain types for program execution against scenes."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, runtime_checkable


class Tri(Enum):
    """Three-valued verdict of a semantic check."""
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Scene:
    """One narrative moment a character reacts to.

    reference_action is present for benchmark scenes and None for live
    chat turns; question is the guiding question (may be empty in chat).
    """
    id: str
    context: str
    question: str = ""
    reference_action: str | None = None
    artifact: str = ""
    character: str = ""
    order_index: int = 0

    def __post_init__(self):
        if not self.context:
            raise ValueError("scene context must be non-empty")
        if self.order_index < 0:
            raise ValueError("order_index must be >= 0")


@dataclass(frozen=True)
class TriggeredStatement:
    """A logic-grounded assertion emitted by one program for this scene."""
    text: str
    segment_id: str
    path: tuple[int, ...] = ()   # arm taken per enclosing if: 0 then, 1..n elifs, n+1 else
    uncertain: bool = False      # some guard on the path resolved UNKNOWN


@dataclass(frozen=True)
class RunSeed:
    """Root of all randomness for one (scene, run) execution."""
    base_seed: int
    scene_id: str
    run_index: int = 0


# --- trace events ---

@dataclass(frozen=True)
class Checked:
    segment_id: str
    question: str
    verdict: Tri
    source: str     # oracle name: llm | table | remote
    cached: bool


@dataclass(frozen=True)
class ChanceDrawn:
    segment_id: str
    p: float
    draw: float
    passed: bool

    def __post_init__(self):
        if self.passed != (self.draw < self.p):
            raise ValueError("passed must equal draw < p")


@dataclass(frozen=True)
class ChoiceMade:
    segment_id: str
    options: tuple[str, ...]
    chosen_index: int

    def __post_init__(self):
        if not 0 <= self.chosen_index < len(self.options):
            raise ValueError("chosen_index out of range")


@dataclass(frozen=True)
class Triggered:
    segment_id: str
    text: str
    uncertain: bool = False


@dataclass(frozen=True)
class BranchTaken:
    segment_id: str
    kind: str                # then | elif | else | skipped
    arm: int | None = None   # arm index; the elif ordinal when kind == "elif"


TraceEvent = Checked | ChanceDrawn | ChoiceMade | Triggered | BranchTaken


@runtime_checkable
class ConditionVerdictLike(Protocol):
    verdict: Tri
    source: str
    cached: bool


class ConditionOracle(Protocol):
    """What the interpreter needs from a condition backend."""
    name: str

    def check_condition(self, scene: Scene,
                        question: str) -> ConditionVerdictLike: ...
