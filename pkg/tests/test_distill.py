"""Distillation export: JSONL schema, dedup, mining from eval records."""

import json

import pytest

from charlogic.oracles.distill import export_distillation_data, records_from_eval


def read_jsonl(path):
    return [json.loads(line) for line in
            path.read_text(encoding="utf-8").splitlines()]


def test_export_writes_one_case_per_line(tmp_path):
    out = export_distillation_data(
        [("A storm closes the pass.", "Is travel possible?", "no"),
         ("The inn is full of traders.", "Is it crowded?", "yes")],
        tmp_path / "cases.jsonl")
    rows = read_jsonl(out)
    assert rows == [
        {"scene": "A storm closes the pass.",
         "question": "Is travel possible?", "label": "no"},
        {"scene": "The inn is full of traders.",
         "question": "Is it crowded?", "label": "yes"},
    ]


def test_export_keeps_first_of_duplicate_pair(tmp_path):
    out = export_distillation_data(
        [("scene", "Is it day?", "yes"),
         ("scene", "Is it day?", "no"),
         ("scene", "Is it night?", "unknown")],
        tmp_path / "cases.jsonl")
    rows = read_jsonl(out)
    assert len(rows) == 2
    assert rows[0]["label"] == "yes"


def test_export_rejects_bad_label(tmp_path):
    with pytest.raises(ValueError):
        export_distillation_data([("scene", "Is it day?", "true")],
                                 tmp_path / "cases.jsonl")


def test_export_rejects_empty_input(tmp_path):
    with pytest.raises(ValueError):
        export_distillation_data([], tmp_path / "cases.jsonl")


def test_records_from_eval_mines_checked_events():
    eval_records = [
        {"scene_id": "sc-1", "trace": [
            {"event": "checked", "question": "Is it day?", "verdict": "true"},
            {"event": "chance_drawn", "p": 0.5, "passed": True},
            {"event": "checked", "question": "Is it cold?",
             "verdict": "false"},
        ]},
        {"scene_id": "sc-2", "trace": [
            {"event": "checked", "question": "Is anyone home?",
             "verdict": "unknown"},
        ]},
    ]
    texts = {"sc-1": "Noon sun over the square.", "sc-2": "A shut door."}
    records = records_from_eval(eval_records, texts)
    assert records == [
        ("Noon sun over the square.", "Is it day?", "yes"),
        ("Noon sun over the square.", "Is it cold?", "no"),
        ("A shut door.", "Is anyone home?", "unknown"),
    ]


def test_records_from_eval_skips_unknown_scene():
    eval_records = [
        {"scene_id": "ghost", "trace": [
            {"event": "checked", "question": "Is it day?", "verdict": "true"},
        ]},
    ]
    assert records_from_eval(eval_records, {}) == []


def test_roundtrip_mine_then_export(tmp_path):
    eval_records = [
        {"scene_id": "sc-1", "trace": [
            {"event": "checked", "question": "Is it day?", "verdict": "true"},
            {"event": "checked", "question": "Is it day?", "verdict": "true"},
        ]},
    ]
    records = records_from_eval(eval_records, {"sc-1": "Noon."})
    out = export_distillation_data(records, tmp_path / "cases.jsonl")
    assert read_jsonl(out) == [
        {"scene": "Noon.", "question": "Is it day?", "label": "yes"}]
