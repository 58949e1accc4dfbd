"""Evaluation drivers: basic, evolving, stochastic, and pairwise compare.

Basic and stochastic fan out across scenes with a worker pool and then
reassemble records in benchmark order, so records.jsonl is byte-stable
for deterministic backends regardless of thread scheduling. Evolving is
sequential per character by contract.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..codifier.codify import rag_fallback_program
from ..codifier.segment import Granularity, segment_profile
from ..engine.types import RunSeed, Scene
from ..evolver.evolve import evolving_run
from ..evolver.store import VersionStore
from ..llm.client import GenerationConfig, LlmClient
from ..oracles.nli import NliJudge, NliRelation
from ..oracles.preference import preference_judge
from ..responder import Grounding, Mode, Responder
from .data import BenchmarkSet, CharacterEntry, EvalRecord, write_records
from .scoring import Report, render_report, score_run

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    records: list[EvalRecord]
    report: Report
    errors: list[str] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return bool(self.errors or self.report.incomplete)


def _grounding_for(entry: CharacterEntry, mode: Mode,
                   store: VersionStore | None,
                   granularity: Granularity) -> Grounding:
    if mode is Mode.VANILLA:
        return Grounding(Mode.VANILLA, entry.character)
    if mode is Mode.TEXTUAL:
        return Grounding(Mode.TEXTUAL, entry.character,
                         profile_text=entry.profile.text)
    if mode is Mode.CODIFIED_RAG:
        segments = segment_profile(entry.profile.text, granularity)
        programs = tuple(rag_fallback_program(s) for s in segments)
        return Grounding(Mode.CODIFIED_RAG, entry.character,
                         programs=programs)
    if store is None:
        raise ValueError(f"{mode.value} mode needs a codified store for "
                         f"{entry.character!r}")
    programs = tuple(store.programs())
    if mode is Mode.CODIFIED:
        return Grounding(Mode.CODIFIED, entry.character, programs=programs)
    return Grounding(Mode.ENSEMBLE, entry.character, programs=programs,
                     profile_text=entry.profile.text)


def run_basic(benchmark: BenchmarkSet, oracle, nli: NliJudge,
              llm: LlmClient, stores: dict[str, VersionStore] | None = None,
              mode: Mode = Mode.CODIFIED,
              generation: GenerationConfig | None = None,
              cot_budget: int = 0, base_seed: int = 0, workers: int = 1,
              granularity: Granularity = Granularity.PARAGRAPH,
              config_echo: dict | None = None) -> RunResult:
    responder = Responder(llm, oracle, generation, cot_budget)
    stores = stores or {}
    errors: list[str] = []
    jobs: list[tuple[CharacterEntry, Scene, Grounding]] = []
    for entry in benchmark.characters:
        try:
            grounding = _grounding_for(entry, mode, stores.get(entry.character),
                                       granularity)
        except ValueError as err:
            errors.append(str(err))
            continue
        for scene in entry.scenes:
            jobs.append((entry, scene, grounding))

    def one(job) -> EvalRecord:
        entry, scene, grounding = job
        rr = responder.respond(scene, grounding,
                               RunSeed(base_seed, scene.id, 0))
        verdict = nli.judge(scene.reference_action or "", rr.response, scene)
        version = 0
        store = stores.get(entry.character)
        if store is not None and mode in (Mode.CODIFIED, Mode.ENSEMBLE):
            version = store.latest_version
        return EvalRecord(
            scene_id=scene.id, mode=mode.value, response=rr.response,
            relation=verdict.relation.value, score=verdict.score,
            character=entry.character, version_used=version,
            forward_passes=rr.forward_passes, triggered=rr.triggered,
            trace=rr.trace)

    records = _fan_out(jobs, one, workers, errors)
    report = score_run(records, benchmark=benchmark, config=config_echo)
    return RunResult(records, report, errors)


def run_evolving(benchmark: BenchmarkSet, oracle, nli: NliJudge,
                 llm: LlmClient, stores: dict[str, VersionStore],
                 generation: GenerationConfig | None = None,
                 cot_budget: int = 0, base_seed: int = 0,
                 max_attempts: int = 3, textual: bool = False,
                 config_echo: dict | None = None) -> RunResult:
    records: list[EvalRecord] = []
    errors: list[str] = []
    for entry in benchmark.characters:
        scenes = list(entry.scenes)
        if textual:
            recs, errs = _textual_evolving(entry, scenes, nli, llm,
                                           generation, cot_budget)
            records.extend(recs)
            errors.extend(errs)
            continue
        store = stores.get(entry.character)
        if store is None:
            errors.append(f"no codified store for {entry.character!r}")
            continue
        result = evolving_run(scenes, store, oracle, nli, llm, base_seed,
                              generation, cot_budget, max_attempts)
        records.extend(result.records)
        errors.extend(result.errors)
    report = score_run(records, benchmark=benchmark, config=config_echo,
                       order_dependent=True)
    return RunResult(records, report, errors)


def _textual_evolving(entry: CharacterEntry, scenes: list[Scene],
                      nli: NliJudge, llm: LlmClient,
                      generation: GenerationConfig | None,
                      cot_budget: int) -> tuple[list[EvalRecord], list[str]]:
    """Textual-profile evolution: patch notes appended to the profile."""
    responder = Responder(llm, None, generation, cot_budget)
    notes: list[str] = []
    records: list[EvalRecord] = []
    errors: list[str] = []
    for scene in scenes:
        text = entry.profile.text
        if notes:
            text += "\n\nCorrections from the storyline so far:\n" + \
                "\n".join(f"- {n}" for n in notes)
        grounding = Grounding(Mode.TEXTUAL, entry.character,
                              profile_text=text)
        try:
            rr = responder.respond(scene, grounding)
            verdict = nli.judge(scene.reference_action or "", rr.response,
                                scene)
        except Exception as err:
            log.error("scene %s failed: %s", scene.id, err)
            errors.append(f"{scene.id}: {err}")
            continue
        records.append(EvalRecord(
            scene_id=scene.id, mode=Mode.TEXTUAL.value,
            response=rr.response, relation=verdict.relation.value,
            score=verdict.score, character=entry.character,
            version_used=len(notes), forward_passes=rr.forward_passes))
        if verdict.relation is not NliRelation.ENTAILED:
            notes.append(f"In a scene like: {scene.context[:120]} "
                         f"the expected behavior is: "
                         f"{scene.reference_action}")
    return records, errors


def run_stochastic(benchmark: BenchmarkSet, oracle, nli: NliJudge,
                   llm: LlmClient, stores: dict[str, VersionStore],
                   k: int, base_seed: int = 0,
                   generation: GenerationConfig | None = None,
                   cot_budget: int = 0, workers: int = 1,
                   config_echo: dict | None = None) -> RunResult:
    if k < 2:
        raise ValueError("stochastic runs need k >= 2")
    responder = Responder(llm, oracle, generation, cot_budget)
    errors: list[str] = []
    jobs: list[tuple[CharacterEntry, Scene, Grounding]] = []
    for entry in benchmark.characters:
        store = stores.get(entry.character)
        if store is None:
            errors.append(f"no codified store for {entry.character!r}")
            continue
        grounding = Grounding(Mode.CODIFIED, entry.character,
                              programs=tuple(store.programs()))
        for scene in entry.scenes:
            jobs.append((entry, scene, grounding))

    def one(job) -> list[EvalRecord]:
        entry, scene, grounding = job
        out = []
        for rr in responder.respond_stochastic(scene, grounding, k,
                                               base_seed):
            verdict = nli.judge(scene.reference_action or "", rr.response,
                                scene)
            out.append(EvalRecord(
                scene_id=scene.id, mode=rr.mode.value, response=rr.response,
                relation=verdict.relation.value, score=verdict.score,
                character=entry.character,
                forward_passes=rr.forward_passes, k_index=rr.run_index,
                triggered=rr.triggered, trace=rr.trace))
        return out

    grouped = _fan_out(jobs, one, workers, errors)
    records = [record for group in grouped for record in group]
    report = score_run(records, k=k, benchmark=benchmark, config=config_echo)
    return RunResult(records, report, errors)


def _fan_out(jobs, fn, workers: int, errors: list[str]) -> list:
    """Run fn over jobs, preserving job order in the output; failures are
    logged and recorded, not fatal."""
    results: dict[int, object] = {}

    def guarded(index_job):
        index, job = index_job
        try:
            results[index] = fn(job)
        except Exception as err:
            _, scene, _ = job
            log.error("scene %s failed: %s", scene.id, err)
            errors.append(f"{scene.id}: {err}")

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(guarded, enumerate(jobs)))
    else:
        for item in enumerate(jobs):
            guarded(item)
    return [results[i] for i in sorted(results)]


def compare_runs(benchmark: BenchmarkSet, records_a: list[EvalRecord],
                 records_b: list[EvalRecord], judge) -> dict[str, int]:
    """Pairwise preference of run A responses over run B, per scene."""
    scenes = benchmark.scenes_by_id
    first_of: dict[str, EvalRecord] = {}
    for record in records_a:
        first_of.setdefault(record.scene_id, record)
    counts = {"win": 0, "tie": 0, "loss": 0}
    seen: set[str] = set()
    for record in records_b:
        scene_id = record.scene_id
        if scene_id in seen or scene_id not in first_of:
            continue
        seen.add(scene_id)
        scene = scenes.get(scene_id)
        reference = scene.reference_action if scene else None
        if not reference:
            continue
        verdict = preference_judge(judge, reference,
                                   first_of[scene_id].response,
                                   record.response, scene)
        if verdict.winner == "A":
            counts["win"] += 1
        elif verdict.winner == "B":
            counts["loss"] += 1
        else:
            counts["tie"] += 1
    return counts


def write_run(out_dir: str | Path, result: RunResult) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_records(result.records, out / "records.jsonl")
    (out / "report.json").write_text(
        json.dumps(result.report.to_json(), indent=2, ensure_ascii=False)
        + "\n", encoding="utf-8")
    (out / "report.txt").write_text(render_report(result.report),
                                    encoding="utf-8")
    return out
