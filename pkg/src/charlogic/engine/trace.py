"""Trace event serialization: one JSON object per event, schema "v": 1."""

from __future__ import annotations

from .types import (
    BranchTaken, ChanceDrawn, Checked, ChoiceMade, TraceEvent, Tri,
    Triggered,
)

SCHEMA_VERSION = 1


def event_to_json(event: TraceEvent) -> dict:
    base = {"v": SCHEMA_VERSION, "segment_id": event.segment_id}
    if isinstance(event, Checked):
        return {**base, "event": "checked", "question": event.question,
                "verdict": event.verdict.value, "source": event.source,
                "cached": event.cached}
    if isinstance(event, ChanceDrawn):
        return {**base, "event": "chance_drawn", "p": event.p,
                "draw": event.draw, "passed": event.passed}
    if isinstance(event, ChoiceMade):
        return {**base, "event": "choice_made",
                "options": list(event.options),
                "chosen_index": event.chosen_index}
    if isinstance(event, Triggered):
        return {**base, "event": "triggered", "text": event.text,
                "uncertain": event.uncertain}
    if isinstance(event, BranchTaken):
        return {**base, "event": "branch_taken", "kind": event.kind,
                "arm": event.arm}
    raise TypeError(f"not a trace event: {event!r}")


def events_to_json(events: list[TraceEvent]) -> list[dict]:
    return [event_to_json(e) for e in events]


def event_from_json(obj: dict) -> TraceEvent:
    if obj.get("v") != SCHEMA_VERSION:
        raise ValueError(f"unsupported trace schema version: {obj.get('v')!r}")
    kind = obj["event"]
    seg = obj["segment_id"]
    if kind == "checked":
        return Checked(seg, obj["question"], Tri(obj["verdict"]),
                       obj["source"], obj["cached"])
    if kind == "chance_drawn":
        return ChanceDrawn(seg, obj["p"], obj["draw"], obj["passed"])
    if kind == "choice_made":
        return ChoiceMade(seg, tuple(obj["options"]), obj["chosen_index"])
    if kind == "triggered":
        return Triggered(seg, obj["text"], obj.get("uncertain", False))
    if kind == "branch_taken":
        return BranchTaken(seg, obj["kind"], obj.get("arm"))
    raise ValueError(f"unknown trace event: {kind!r}")
