"""Benchmark file formats: scene JSONL, pack manifests, record round-trips."""

import json

import pytest

from charlogic.bench.data import (BenchmarkSet, CharacterEntry, EvalRecord,
                                  load_benchmark, load_scenes, read_records,
                                  save_scenes, write_records)
from charlogic.codifier.segment import Profile
from charlogic.engine.types import Checked, Scene, Tri, TriggeredStatement


def test_scene_jsonl_round_trip(tmp_path):
    scenes = [
        Scene("a-0", "First scene.", question="What now?",
              reference_action="She acts.", artifact="art",
              character="Ayla", order_index=0),
        Scene("a-1", "Second scene.", character="Ayla", order_index=1),
    ]
    path = tmp_path / "scenes.jsonl"
    save_scenes(scenes, path)
    assert load_scenes(path) == scenes


def test_load_scenes_defaults_optional_fields(tmp_path):
    path = tmp_path / "scenes.jsonl"
    path.write_text(json.dumps({"id": "x", "context": "ctx"}) + "\n",
                    encoding="utf-8")
    scene = load_scenes(path)[0]
    assert scene.question == ""
    assert scene.reference_action is None
    assert scene.order_index == 0


def test_character_entry_rejects_unsorted_scenes():
    profile = Profile("A", "", "t")
    scenes = (Scene("a-1", "c", character="A", order_index=1),
              Scene("a-0", "c", character="A", order_index=0))
    with pytest.raises(ValueError):
        CharacterEntry("A", "main", profile, scenes)


def test_character_entry_rejects_duplicate_ids():
    profile = Profile("A", "", "t")
    scenes = (Scene("a-0", "c", character="A"),
              Scene("a-0", "c again", character="A"))
    with pytest.raises(ValueError):
        CharacterEntry("A", "main", profile, scenes)


def test_load_benchmark_resolves_relative_paths(miniverse_pack):
    benchmark = load_benchmark(miniverse_pack)
    assert benchmark.artifact == "miniverse"
    assert [e.character for e in benchmark.characters] == [
        "Ayla", "Boro", "Cyra"]
    assert benchmark.entry("Boro").tier == "main"
    assert benchmark.entry("Cyra").tier == "minor"
    assert len(benchmark.scenes_by_id) == 12
    # scenes are partitioned to their character and ordered
    for entry in benchmark.characters:
        assert all(s.character == entry.character for s in entry.scenes)
        orders = [s.order_index for s in entry.scenes]
        assert orders == sorted(orders)


def test_benchmark_unknown_character_raises(miniverse_pack):
    with pytest.raises(KeyError):
        load_benchmark(miniverse_pack).entry("Nobody")


def test_eval_record_round_trip():
    record = EvalRecord(
        scene_id="a-0", mode="codified", response="She acts.",
        relation="entailed", score=100, character="Ayla", version_used=2,
        forward_passes=3, k_index=1,
        triggered=(TriggeredStatement("She acts.", "s0", (0,), True),),
        trace=(Checked("s0", "Is it time?", Tri.TRUE, "table", False),))
    assert EvalRecord.from_json(record.to_json()) == record


def test_eval_record_rejects_off_scale_score():
    with pytest.raises(ValueError):
        EvalRecord(scene_id="a", mode="codified", response="r",
                   relation="neutral", score=75)


def test_records_jsonl_round_trip(tmp_path):
    records = [
        EvalRecord(scene_id="a-0", mode="codified", response="r1",
                   relation="entailed", score=100),
        EvalRecord(scene_id="a-1", mode="codified", response="r2",
                   relation="contradicted", score=0, k_index=0),
    ]
    path = tmp_path / "records.jsonl"
    write_records(records, path)
    assert read_records(path) == records


def test_record_json_key_order_is_stable():
    record = EvalRecord(scene_id="a", mode="codified", response="r",
                        relation="neutral", score=50)
    assert list(record.to_json()) == [
        "scene_id", "character", "mode", "response", "relation", "score",
        "version_used", "forward_passes", "k_index", "triggered", "trace"]
