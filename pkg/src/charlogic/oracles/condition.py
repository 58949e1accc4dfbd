"""Condition checking: answer a natural-language question about a scene
with TRUE, FALSE, or UNKNOWN.

Three backends. The LLM backend classifies over the yes/no/unknown
verbalizers at temperature 0; the table backend is the deterministic
test double; the remote backend talks to a served distilled classifier.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from pathlib import Path

import httpx

from ..engine.types import Scene, Tri
from ..errors import OracleUnavailable, Unparseable
from ..llm.client import GenerationConfig, LlmClient
from ..llm.providers import ProviderError
from ..llm.templates import PromptTemplate, load_template

log = logging.getLogger(__name__)

VERBALIZERS = ("yes", "no", "unknown")
_LABEL_TO_TRI = {"yes": Tri.TRUE, "no": Tri.FALSE, "unknown": Tri.UNKNOWN}


@dataclass(frozen=True)
class ConditionVerdict:
    verdict: Tri
    source: str      # llm | table | remote
    raw_label: str   # one of the verbalizers, or "" when none applied
    cached: bool = False

    def __post_init__(self):
        if self.raw_label not in VERBALIZERS + ("",):
            raise ValueError(f"raw_label {self.raw_label!r} is not a "
                             "configured verbalizer")


def _require_question(question: str) -> None:
    if not question:
        raise ValueError("condition question must be non-empty")


class TableConditionOracle:
    """Exact lookup on (scene.id, question); misses answer UNKNOWN."""

    name = "table"

    def __init__(self, table: dict[str, dict[str, str]]):
        self.table = table

    @classmethod
    def from_file(cls, path: str | Path) -> "TableConditionOracle":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))

    def check_condition(self, scene: Scene, question: str) -> ConditionVerdict:
        _require_question(question)
        label = self.table.get(scene.id, {}).get(question)
        if label is None:
            return ConditionVerdict(Tri.UNKNOWN, self.name, "")
        return ConditionVerdict(_LABEL_TO_TRI[label], self.name, label)


class LlmConditionOracle:
    name = "llm"

    def __init__(self, client: LlmClient, model_name: str | None = None,
                 template: PromptTemplate | None = None):
        model = (model_name or os.environ.get("CP_ORACLE_MODEL")
                 or os.environ.get("CP_LLM_MODEL", ""))
        self.client = client
        self.config = GenerationConfig(model, temperature=0.0, max_tokens=4)
        self.template = template or load_template("condition")

    def check_condition(self, scene: Scene, question: str) -> ConditionVerdict:
        _require_question(question)
        bindings = {"scene": scene.context, "question": question}
        try:
            label, _, exchange = self.client.classify_ex(
                self.template, bindings, list(VERBALIZERS), self.config)
        except Unparseable as err:
            log.warning("condition oracle gave no verbalizer (%s); "
                        "treating as unknown", err)
            return ConditionVerdict(Tri.UNKNOWN, self.name, "")
        except ProviderError as err:
            raise OracleUnavailable(str(err)) from err
        return ConditionVerdict(_LABEL_TO_TRI[label], self.name, label,
                                cached=exchange.cache_hit)


class RemoteConditionOracle:
    """Client for a served 3-class checker: POST {scene, question} ->
    {label, scores}."""

    name = "remote"
    max_attempts = 5
    backoff_base_s = 0.5

    def __init__(self, url: str | None = None, timeout_s: float = 10.0):
        self.url = url or os.environ.get("CP_REMOTE_CHECKER_URL", "")
        if not self.url:
            raise OracleUnavailable(
                "no remote checker URL: set CP_REMOTE_CHECKER_URL")
        self._client = httpx.Client(timeout=timeout_s)

    def check_condition(self, scene: Scene, question: str) -> ConditionVerdict:
        _require_question(question)
        payload = {"scene": scene.context, "question": question}
        last_error: Exception | None = None
        for attempt in range(self.max_attempts):
            if attempt:
                time.sleep(self.backoff_base_s * 2 ** (attempt - 1))
            try:
                response = self._client.post(self.url, json=payload)
            except httpx.TransportError as err:
                last_error = err
                continue
            if response.status_code == 429 or response.status_code >= 500:
                last_error = OracleUnavailable(
                    f"HTTP {response.status_code} from remote checker")
                continue
            return self._parse(response)
        raise OracleUnavailable(
            f"remote checker unreachable after {self.max_attempts} "
            f"attempts: {last_error}")

    def _parse(self, response: httpx.Response) -> ConditionVerdict:
        try:
            body = response.json()
            label = body["label"]
        except (ValueError, KeyError, TypeError):
            log.warning("malformed remote checker reply: %s",
                        response.text[:200])
            return ConditionVerdict(Tri.UNKNOWN, self.name, "")
        if label not in VERBALIZERS:
            log.warning("remote checker answered %r, not a verbalizer", label)
            return ConditionVerdict(Tri.UNKNOWN, self.name, "")
        return ConditionVerdict(_LABEL_TO_TRI[label], self.name, label)
