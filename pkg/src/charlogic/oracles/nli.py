"""NLI scoring of a response against the reference action.

Relations map to scores by the fixed rule entailed=100, neutral=50,
contradicted=0. Identical strings short-circuit to ENTAILED before any
judge call. Unparseable judge output degrades to NEUTRAL: the scale has
a natural middle, and aborting a long run on one flaky judgment is
worse than a conservative midpoint.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from ..engine.types import Scene
from ..errors import Unparseable
from ..llm.client import GenerationConfig, LlmClient
from ..llm.templates import PromptTemplate, load_template

log = logging.getLogger(__name__)


class NliRelation(Enum):
    ENTAILED = "entailed"
    NEUTRAL = "neutral"
    CONTRADICTED = "contradicted"


RELATION_SCORE = {
    NliRelation.ENTAILED: 100,
    NliRelation.NEUTRAL: 50,
    NliRelation.CONTRADICTED: 0,
}


@dataclass(frozen=True)
class NliVerdict:
    relation: NliRelation
    score: int

    def __post_init__(self):
        if self.score != RELATION_SCORE[self.relation]:
            raise ValueError(
                f"score {self.score} breaks the 100/50/0 mapping "
                f"for {self.relation.value}")

    @classmethod
    def of(cls, relation: NliRelation) -> "NliVerdict":
        return cls(relation, RELATION_SCORE[relation])


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class NliJudge:
    """Base: preconditions and the reflexivity shortcut, then delegate."""

    def judge(self, reference: str, response: str,
              scene: Scene | None = None) -> NliVerdict:
        if not reference or not response:
            raise ValueError("reference and response must be non-empty")
        if reference == response:
            return NliVerdict.of(NliRelation.ENTAILED)
        return self._decide(reference, response, scene)

    def _decide(self, reference: str, response: str,
                scene: Scene | None) -> NliVerdict:
        raise NotImplementedError


class TableNliJudge(NliJudge):
    """Lookup on (sha256(reference), sha256(response)). Test double."""

    def __init__(self, table: dict[str, dict[str, str]]):
        self.table = table

    @classmethod
    def from_file(cls, path: str | Path) -> "TableNliJudge":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def _decide(self, reference: str, response: str,
                scene: Scene | None) -> NliVerdict:
        name = self.table.get(text_hash(reference), {}).get(
            text_hash(response))
        if name is None:
            log.warning("NLI table has no entry for this pair; "
                        "treating as neutral (ref %r..., resp %r...)",
                        reference[:40], response[:40])
            return NliVerdict.of(NliRelation.NEUTRAL)
        return NliVerdict.of(NliRelation(name))


class LlmNliJudge(NliJudge):
    def __init__(self, client: LlmClient, model_name: str,
                 include_scene: bool = True,
                 template: PromptTemplate | None = None):
        self.client = client
        self.config = GenerationConfig(model_name, temperature=0.0,
                                       max_tokens=4)
        self.include_scene = include_scene
        self.template = template or load_template("nli")

    def _decide(self, reference: str, response: str,
                scene: Scene | None) -> NliVerdict:
        scene_block = ""
        if self.include_scene and scene is not None:
            scene_block = f"\nScene:\n{scene.context}\n"
        bindings = {"reference": reference, "response": response,
                    "scene_block": scene_block}
        labels = [r.value for r in NliRelation]
        try:
            label, _ = self.client.classify(self.template, bindings, labels,
                                            self.config)
        except Unparseable as err:
            log.warning("NLI judge output unparseable (%s); "
                        "scoring neutral", err)
            return NliVerdict.of(NliRelation.NEUTRAL)
        return NliVerdict.of(NliRelation(label))


def nli_judge(judge: NliJudge, reference: str, response: str,
              scene: Scene | None = None) -> NliVerdict:
    return judge.judge(reference, response, scene)
