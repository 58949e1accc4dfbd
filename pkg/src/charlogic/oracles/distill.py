"""Export condition-checking decisions as classifier training data.

Each record is one (scene text, question, label) case; duplicates of the
same (scene, question) keep the first label seen. The JSONL output is
what an external 3-class classifier trains on; training itself is out of
scope here.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable

log = logging.getLogger(__name__)

_LABELS = ("yes", "no", "unknown")
_TRI_TO_LABEL = {"true": "yes", "false": "no", "unknown": "unknown"}


def export_distillation_data(records: list[tuple[str, str, str]],
                             out_path: str | Path) -> Path:
    if not records:
        raise ValueError("no records to export")
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    seen: set[tuple[str, str]] = set()
    kept = 0
    with out.open("w", encoding="utf-8") as fh:
        for scene, question, label in records:
            if label not in _LABELS:
                raise ValueError(f"label {label!r} is not one of {_LABELS}")
            key = (scene, question)
            if key in seen:
                continue
            seen.add(key)
            fh.write(json.dumps({"scene": scene, "question": question,
                                 "label": label}, ensure_ascii=False) + "\n")
            kept += 1
    log.info("exported %d distillation cases to %s (%d duplicates dropped)",
             kept, out, len(records) - kept)
    return out


def records_from_eval(eval_records: Iterable[dict],
                      scene_texts: dict[str, str]) -> list[tuple[str, str, str]]:
    """Mine Checked trace events out of eval records.

    eval_records are parsed records.jsonl rows; scene_texts maps scene_id
    to scene context. Rows for unknown scenes are skipped with a warning.
    """
    out: list[tuple[str, str, str]] = []
    for row in eval_records:
        scene_id = row.get("scene_id", "")
        text = scene_texts.get(scene_id)
        if text is None:
            log.warning("no scene text for %r; skipping its checks", scene_id)
            continue
        for event in row.get("trace", []):
            if event.get("event") != "checked":
                continue
            label = _TRI_TO_LABEL.get(event.get("verdict", ""))
            if label is None:
                continue
            out.append((text, event["question"], label))
    return out
