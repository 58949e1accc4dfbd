"""The evolving loop: test a scene, and when the response is not
entailed, blame one segment, revise its program, commit, move on.

Both CONTRADICTED and NEUTRAL route to the update path; one revision
attempt per failing scene, no inner re-test loop. Segments that fired
nothing are still listed to the blame judge and are eligible.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from ..bench.data import EvalRecord
from ..dsl.ast import Diagnostic, Program
from ..dsl.parser import parse
from ..engine.types import RunSeed, Scene, TriggeredStatement
from ..errors import ReviseFailed
from ..llm.client import GenerationConfig, LlmClient
from ..llm.templates import PromptTemplate, load_template
from ..codifier.codify import extract_code_block
from ..oracles.nli import NliJudge, NliRelation, NliVerdict
from ..responder import Grounding, Mode, Responder, ResponseRecord
from .store import Revision, VersionStore

log = logging.getLogger(__name__)

ISSUE_WORDING = {
    NliRelation.CONTRADICTED: "contradicted statement",
    NliRelation.NEUTRAL: "relevant but not detailed statement",
}


def _statements_by_segment(segment_ids: list[str],
                           triggered: tuple[TriggeredStatement, ...]) -> str:
    lines = []
    for segment_id in segment_ids:
        fired = [t.text for t in triggered if t.segment_id == segment_id]
        if fired:
            lines.append(f"{segment_id}:")
            lines.extend(f"  - {text}" for text in fired)
        else:
            lines.append(f"{segment_id}: fired nothing")
    return "\n".join(lines)


def _find_segment_id(completion: str, segment_ids: list[str]) -> str | None:
    stripped = completion.strip()
    if stripped in segment_ids:
        return stripped
    for word in re.findall(r"[A-Za-z0-9_-]+", completion):
        if word in segment_ids:
            return word
    return None


def diagnose(scene: Scene, response: ResponseRecord, verdict: NliVerdict,
             llm: LlmClient, segment_ids: list[str],
             config: GenerationConfig | None = None,
             template: PromptTemplate | None = None,
             ) -> tuple[str, NliRelation]:
    if verdict.relation is NliRelation.ENTAILED:
        raise ValueError("nothing to diagnose: the response was entailed")
    if response.mode is not Mode.CODIFIED:
        raise ValueError("diagnosis expects a CODIFIED response")
    config = config or GenerationConfig("", temperature=0.0, max_tokens=16)
    template = template or load_template("blame")
    issue = verdict.relation
    bindings = {
        "issue": ISSUE_WORDING[issue],
        "scene": scene.context,
        "statements": _statements_by_segment(segment_ids,
                                             response.triggered),
        "reference": scene.reference_action or "",
        "response": response.response,
        "feedback": "",
    }
    for attempt in range(2):
        exchange = llm.complete(template, bindings, config)
        blamed = _find_segment_id(exchange.completion, segment_ids)
        if blamed is not None:
            return blamed, issue
        log.warning("blame answer %r names no listed segment (attempt %d)",
                    exchange.completion[:80], attempt + 1)
        bindings = {**bindings, "feedback":
                    "\nYour previous answer was not one of the listed "
                    "segment ids. Answer with exactly one id from the "
                    "list above.\n"}
    # fallback: most triggered statements, ties to the lowest index
    counts = {sid: sum(t.segment_id == sid for t in response.triggered)
              for sid in segment_ids}
    blamed = max(segment_ids, key=lambda sid: (counts[sid],
                                               -segment_ids.index(sid)))
    log.warning("falling back to segment %s by trigger count", blamed)
    return blamed, issue


def revise_segment(store: VersionStore, blamed_id: str, scene: Scene,
                   triggered: tuple[TriggeredStatement, ...],
                   reference: str, response: str, llm: LlmClient,
                   issue: NliRelation, max_attempts: int = 3,
                   config: GenerationConfig | None = None,
                   template: PromptTemplate | None = None) -> Revision:
    sources = store.sources()
    if blamed_id not in sources:
        raise KeyError(f"segment {blamed_id!r} is not in the current version")
    old_source = sources[blamed_id]
    config = config or GenerationConfig("", temperature=0.0, max_tokens=768)
    template = template or load_template("revise")
    fired = [t.text for t in triggered if t.segment_id == blamed_id]
    feedback = ""
    failures: list[list[Diagnostic]] = []
    for _ in range(max_attempts):
        bindings = {
            "character": store.character,
            "segment_id": blamed_id,
            "old_source": old_source.rstrip("\n"),
            "scene": scene.context,
            "statements": "; ".join(fired) if fired else "(none)",
            "reference": reference,
            "response": response,
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
            result = parse(code, blamed_id)
            if isinstance(result, Program):
                rationale = _FENCE_STRIP_RE.sub("", exchange.completion)
                revision = Revision(
                    version=store.latest_version + 1,
                    scene_id=scene.id,
                    blamed_segment=blamed_id,
                    issue=issue.value,
                    old_source=old_source,
                    new_source=code,
                    rationale=rationale.strip()[:500],
                )
                store.commit(revision)
                return revision
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
    raise ReviseFailed(blamed_id, failures)


_FENCE_STRIP_RE = re.compile(r"```[A-Za-z0-9_-]*\n.*?```", re.DOTALL)


@dataclass
class EvolvingResult:
    records: list[EvalRecord]
    revisions: list[Revision] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def evolving_run(scenes: list[Scene], store: VersionStore, oracle,
                 nli: NliJudge, llm: LlmClient, base_seed: int = 0,
                 generation: GenerationConfig | None = None,
                 cot_budget: int = 0,
                 max_attempts: int = 3) -> EvolvingResult:
    for earlier, later in zip(scenes, scenes[1:]):
        if later.order_index < earlier.order_index:
            raise ValueError("scenes must be sorted by order_index")
    responder = Responder(llm, oracle, generation, cot_budget)
    result = EvolvingResult([])
    for scene in scenes:
        version = store.latest_version
        grounding = Grounding(Mode.CODIFIED, store.character,
                              tuple(store.programs()))
        try:
            rr = responder.respond(scene, grounding,
                                   RunSeed(base_seed, scene.id, 0))
            verdict = nli.judge(scene.reference_action or "", rr.response,
                                scene)
        except Exception as err:  # per-scene failure; the run continues
            log.error("scene %s failed: %s", scene.id, err)
            result.errors.append(f"{scene.id}: {err}")
            continue
        result.records.append(EvalRecord(
            scene_id=scene.id, mode=rr.mode.value, response=rr.response,
            relation=verdict.relation.value, score=verdict.score,
            character=store.character, version_used=version,
            forward_passes=rr.forward_passes,
            triggered=rr.triggered, trace=rr.trace))
        if verdict.relation is NliRelation.ENTAILED:
            continue
        try:
            blamed, issue = diagnose(scene, rr, verdict, llm,
                                     store.segment_order)
            revision = revise_segment(
                store, blamed, scene, rr.triggered,
                scene.reference_action or "", rr.response, llm, issue,
                max_attempts)
            result.revisions.append(revision)
        except ReviseFailed as err:
            log.error("scene %s: %s; version unchanged", scene.id, err)
            result.errors.append(f"{scene.id}: {err}")
    return result
