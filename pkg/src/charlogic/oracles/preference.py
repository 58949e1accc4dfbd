"""Pairwise preference judging with order-swap tie breaking.

The judge sees the candidates in both orders; only a consistent pair of
picks names a winner, anything else (including position bias and
unparseable output) records a TIE.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

from ..engine.types import Scene
from ..errors import Unparseable
from ..llm.client import GenerationConfig, LlmClient
from ..llm.templates import PromptTemplate, load_template

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreferenceVerdict:
    winner: str              # "A" | "B" | "TIE"
    order_consistent: bool


class LlmPreferenceJudge:
    def __init__(self, client: LlmClient, model_name: str,
                 include_scene: bool = True,
                 template: PromptTemplate | None = None):
        self.client = client
        self.config = GenerationConfig(model_name, temperature=0.0,
                                       max_tokens=4)
        self.include_scene = include_scene
        self.template = template or load_template("preference")

    def pick(self, reference: str, first: str, second: str,
             scene: Scene | None = None) -> str | None:
        scene_block = ""
        if self.include_scene and scene is not None:
            scene_block = f"\nScene:\n{scene.context}\n"
        bindings = {"reference": reference, "first": first,
                    "second": second, "scene_block": scene_block}
        try:
            label, _ = self.client.classify(self.template, bindings,
                                            ["1", "2"], self.config)
        except Unparseable as err:
            log.warning("preference judge output unparseable (%s)", err)
            return None
        return label


@dataclass
class ScriptedPreferenceJudge:
    """Deterministic test double: picker(reference, first, second) -> "1"|"2"."""
    picker: Callable[[str, str, str], str]

    def pick(self, reference: str, first: str, second: str,
             scene: Scene | None = None) -> str | None:
        return self.picker(reference, first, second)


def preference_judge(judge, reference: str, response_a: str, response_b: str,
                     scene: Scene | None = None) -> PreferenceVerdict:
    if not reference or not response_a or not response_b:
        raise ValueError("reference and both responses must be non-empty")
    if response_a == response_b:
        return PreferenceVerdict("TIE", order_consistent=True)
    pick_ab = judge.pick(reference, response_a, response_b, scene)
    pick_ba = judge.pick(reference, response_b, response_a, scene)
    if pick_ab == "1" and pick_ba == "2":
        return PreferenceVerdict("A", order_consistent=True)
    if pick_ab == "2" and pick_ba == "1":
        return PreferenceVerdict("B", order_consistent=True)
    return PreferenceVerdict("TIE", order_consistent=False)
