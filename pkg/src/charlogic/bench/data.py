"""Benchmark data model and file formats.

Scenes travel as JSONL rows {id, artifact, character, order_index,
context, question, reference_action}; a benchmark pack is a JSON
manifest naming the scene file and per-character profiles. EvalRecords
serialize one JSONL row per trial, embedding triggered statements and
the versioned trace.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..codifier.segment import Profile
from ..engine.trace import event_from_json, events_to_json
from ..engine.types import Scene, TraceEvent, TriggeredStatement


@dataclass(frozen=True)
class CharacterEntry:
    character: str
    tier: str                     # "main" | "minor"
    profile: Profile
    scenes: tuple[Scene, ...]

    def __post_init__(self):
        ids = [s.id for s in self.scenes]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate scene ids for {self.character!r}")
        orders = [s.order_index for s in self.scenes]
        if orders != sorted(orders):
            raise ValueError(f"scenes for {self.character!r} must be "
                             "sorted by order_index")


@dataclass(frozen=True)
class BenchmarkSet:
    artifact: str
    characters: tuple[CharacterEntry, ...]

    def entry(self, character: str) -> CharacterEntry:
        for candidate in self.characters:
            if candidate.character == character:
                return candidate
        raise KeyError(f"no character {character!r} in benchmark")

    @property
    def scenes_by_id(self) -> dict[str, Scene]:
        return {scene.id: scene
                for entry in self.characters for scene in entry.scenes}


@dataclass(frozen=True)
class EvalRecord:
    scene_id: str
    mode: str
    response: str
    relation: str                 # entailed | neutral | contradicted
    score: int
    character: str = ""
    version_used: int = 0
    forward_passes: int = 0
    k_index: int | None = None
    triggered: tuple[TriggeredStatement, ...] = ()
    trace: tuple[TraceEvent, ...] = ()

    def __post_init__(self):
        if self.score not in (0, 50, 100):
            raise ValueError("score must be one of 0, 50, 100")

    def to_json(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "character": self.character,
            "mode": self.mode,
            "response": self.response,
            "relation": self.relation,
            "score": self.score,
            "version_used": self.version_used,
            "forward_passes": self.forward_passes,
            "k_index": self.k_index,
            "triggered": [{"text": t.text, "segment_id": t.segment_id,
                           "path": list(t.path), "uncertain": t.uncertain}
                          for t in self.triggered],
            "trace": events_to_json(list(self.trace)),
        }

    @classmethod
    def from_json(cls, row: dict) -> "EvalRecord":
        return cls(
            scene_id=row["scene_id"],
            mode=row["mode"],
            response=row["response"],
            relation=row["relation"],
            score=row["score"],
            character=row.get("character", ""),
            version_used=row.get("version_used", 0),
            forward_passes=row.get("forward_passes", 0),
            k_index=row.get("k_index"),
            triggered=tuple(
                TriggeredStatement(t["text"], t["segment_id"],
                                   tuple(t.get("path", ())),
                                   t.get("uncertain", False))
                for t in row.get("triggered", ())),
            trace=tuple(event_from_json(e) for e in row.get("trace", ())),
        )


# --- scene JSONL ---

def load_scenes(path: str | Path) -> list[Scene]:
    scenes = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        row = json.loads(line)
        scenes.append(Scene(
            id=row["id"],
            context=row["context"],
            question=row.get("question", ""),
            reference_action=row.get("reference_action"),
            artifact=row.get("artifact", ""),
            character=row.get("character", ""),
            order_index=row.get("order_index", 0),
        ))
    return scenes


def save_scenes(scenes: list[Scene], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for scene in scenes:
            fh.write(json.dumps({
                "id": scene.id,
                "artifact": scene.artifact,
                "character": scene.character,
                "order_index": scene.order_index,
                "context": scene.context,
                "question": scene.question,
                "reference_action": scene.reference_action,
            }, ensure_ascii=False) + "\n")


# --- benchmark pack manifest ---

def load_benchmark(pack_path: str | Path) -> BenchmarkSet:
    pack_path = Path(pack_path)
    pack = json.loads(pack_path.read_text(encoding="utf-8"))
    base = pack_path.parent
    all_scenes = load_scenes(base / pack["scenes"])
    entries = []
    for spec in pack["characters"]:
        name = spec["name"]
        profile_raw = json.loads(
            (base / spec["profile"]).read_text(encoding="utf-8"))
        profile = Profile(character=profile_raw["character"],
                          artifact=profile_raw.get("artifact", ""),
                          text=profile_raw["text"])
        scenes = sorted((s for s in all_scenes if s.character == name),
                        key=lambda s: s.order_index)
        entries.append(CharacterEntry(
            character=name,
            tier=spec.get("tier", "main"),
            profile=profile,
            scenes=tuple(scenes),
        ))
    return BenchmarkSet(artifact=pack.get("artifact", ""),
                        characters=tuple(entries))


# --- records JSONL ---

def write_records(records: list[EvalRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")


def read_records(path: str | Path) -> list[EvalRecord]:
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            out.append(EvalRecord.from_json(json.loads(line)))
    return out
