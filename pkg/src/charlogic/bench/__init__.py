"""Benchmark data model, scoring, and evaluation drivers."""

from .data import (
    BenchmarkSet, CharacterEntry, EvalRecord, load_benchmark, load_scenes,
    read_records, save_scenes, write_records,
)
from .scoring import Report, best_at_k, render_report, score_run

__all__ = [
    "BenchmarkSet", "CharacterEntry", "EvalRecord", "load_benchmark",
    "load_scenes", "read_records", "save_scenes", "write_records",
    "Report", "best_at_k", "render_report", "score_run",
]
