"""Score aggregation: Best@K, grouping, incompleteness, report text."""

import random

import pytest
from hypothesis import given, strategies as st

from charlogic.bench.data import BenchmarkSet, CharacterEntry, EvalRecord
from charlogic.bench.scoring import Report, best_at_k, render_report, score_run
from charlogic.codifier.segment import Profile
from charlogic.engine.types import Scene


def record(scene_id, score, character="", k_index=None, passes=0):
    return EvalRecord(scene_id=scene_id, mode="codified", response="r",
                      relation={100: "entailed", 50: "neutral",
                                0: "contradicted"}[score],
                      score=score, character=character, k_index=k_index,
                      forward_passes=passes)


# --- best_at_k ------------------------------------------------------------

def brute_force_best(scores, k):
    # independent oracle: literal spec of the statistic
    best = scores[0]
    for s in scores[1:k]:
        if s > best:
            best = s
    return best


def test_best_at_k_prefix_max():
    scores = [0, 50, 100, 0]
    assert best_at_k(scores, 1) == 0
    assert best_at_k(scores, 2) == 50
    assert best_at_k(scores, 3) == 100
    assert best_at_k(scores, 4) == 100


def test_best_at_k_argument_checks():
    with pytest.raises(ValueError):
        best_at_k([100], 0)
    with pytest.raises(ValueError):
        best_at_k([100], 2)


@given(st.lists(st.sampled_from([0, 50, 100]), min_size=1, max_size=12),
       st.data())
def test_best_at_k_matches_brute_force(scores, data):
    k = data.draw(st.integers(1, len(scores)))
    assert best_at_k(scores, k) == brute_force_best(scores, k)


@given(st.lists(st.sampled_from([0, 50, 100]), min_size=1, max_size=12))
def test_best_at_k_non_decreasing_in_k(scores):
    values = [best_at_k(scores, k) for k in range(1, len(scores) + 1)]
    assert values == sorted(values)


# --- score_run -------------------------------------------------------------

def test_mean_over_scene_scores():
    report = score_run([record("a", 100), record("b", 50), record("c", 0)])
    assert report.mean == 50.0
    assert report.record_count == 3
    assert report.incomplete == []


def test_per_character_grouping():
    report = score_run([record("a", 100, "Ayla"), record("b", 0, "Ayla"),
                        record("c", 50, "Boro")])
    assert report.per_character == {"Ayla": 50.0, "Boro": 50.0}


def test_forward_passes_summed():
    report = score_run([record("a", 100, passes=2),
                        record("b", 0, passes=3)])
    assert report.forward_passes == 5


def test_k_runs_grouped_per_scene():
    records = [record("a", 0, k_index=0), record("a", 100, k_index=1),
               record("b", 50, k_index=0), record("b", 50, k_index=1)]
    report = score_run(records, k=2)
    assert report.mean == 75.0  # best of each scene's two runs
    assert report.best_at == {1: 25.0, 2: 75.0}


def test_scene_short_of_k_is_incomplete():
    records = [record("a", 0, k_index=0), record("a", 100, k_index=1),
               record("b", 50, k_index=0)]
    report = score_run(records, k=2)
    assert report.incomplete == ["b"]
    assert report.mean == 100.0  # only scene a counts


def test_benchmark_reveals_missing_scenes_and_tiers():
    profile = Profile("Ayla", "art", "text")
    scenes = (Scene("a-0", "ctx", character="Ayla", order_index=0,
                    artifact="art"),
              Scene("a-1", "ctx", character="Ayla", order_index=1,
                    artifact="art"))
    benchmark = BenchmarkSet("art", (CharacterEntry("Ayla", "main",
                                                    profile, scenes),))
    report = score_run([record("a-0", 100, "Ayla")], benchmark=benchmark)
    assert report.incomplete == ["a-1"]
    assert report.rollups == {"main": 100.0}
    assert report.per_artifact == {"art": 100.0}


def test_empty_run_has_no_mean():
    report = score_run([])
    assert report.mean is None
    assert report.record_count == 0


def test_config_and_order_flag_pass_through():
    report = score_run([record("a", 100)], config={"mode": "codified"},
                       order_dependent=True)
    assert report.config == {"mode": "codified"}
    assert report.order_dependent is True


# --- rendering ----------------------------------------------------------------

def test_render_report_lists_everything():
    report = score_run([record("a", 100, "Ayla", k_index=0),
                        record("a", 0, "Ayla", k_index=1)], k=2,
                       order_dependent=True)
    report.preference = {"win": 3, "tie": 1, "loss": 2}
    text = render_report(report)
    assert "Ayla" in text
    assert "average" in text
    assert "Best@K" in text and "K=1" in text and "K=2" in text
    assert "preference: win 3 / tie 1 / loss 2" in text
    assert "order-dependent" in text
    assert text.endswith("\n")


def test_render_report_marks_incomplete():
    records = [record("a", 0, k_index=0), record("a", 100, k_index=1),
               record("b", 50, k_index=0)]
    text = render_report(score_run(records, k=2))
    assert "incomplete scenes" in text and "b" in text


def test_report_json_round_trip_keys():
    report = score_run([record("a", 100, "Ayla")], k=1)
    blob = report.to_json()
    assert blob["mean"] == 100.0
    assert blob["best_at"] == {"1": 100.0}
    assert blob["per_character"] == {"Ayla": 100.0}
    assert blob["record_count"] == 1
