"""Aggregate EvalRecords into a report.

The report is a pure fold over the records: means recompute exactly from
the JSONL. Best@K takes, per scene, the maximum score among the first K
runs (by k_index). Scenes with missing records are excluded from every
mean and listed as incomplete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .data import BenchmarkSet, EvalRecord


def best_at_k(scores: list[int], k: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(scores) < k:
        raise ValueError(f"need at least {k} scores, have {len(scores)}")
    return max(scores[:k])


@dataclass
class Report:
    mean: float | None = None
    per_character: dict[str, float] = field(default_factory=dict)
    per_artifact: dict[str, float] = field(default_factory=dict)
    rollups: dict[str, float] = field(default_factory=dict)
    best_at: dict[int, float] = field(default_factory=dict)
    preference: dict[str, int] = field(default_factory=dict)
    forward_passes: int = 0
    record_count: int = 0
    incomplete: list[str] = field(default_factory=list)
    order_dependent: bool = False
    config: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "per_character": self.per_character,
            "per_artifact": self.per_artifact,
            "rollups": self.rollups,
            "best_at": {str(k): v for k, v in self.best_at.items()},
            "preference": self.preference,
            "forward_passes": self.forward_passes,
            "record_count": self.record_count,
            "incomplete": self.incomplete,
            "order_dependent": self.order_dependent,
            "config": self.config,
        }


def score_run(records: list[EvalRecord], k: int | None = None,
              benchmark: BenchmarkSet | None = None,
              config: dict | None = None,
              order_dependent: bool = False) -> Report:
    by_scene: dict[str, list[EvalRecord]] = {}
    for record in records:
        by_scene.setdefault(record.scene_id, []).append(record)
    for rows in by_scene.values():
        rows.sort(key=lambda r: (r.k_index is not None, r.k_index or 0))

    need = max(k or 1, 1)
    scene_scores: dict[str, int] = {}
    incomplete: list[str] = []
    for scene_id, rows in by_scene.items():
        if len(rows) < need:
            incomplete.append(scene_id)
            continue
        scene_scores[scene_id] = best_at_k([r.score for r in rows], need)

    character_of: dict[str, str] = {}
    tier_of: dict[str, str] = {}
    artifact_of: dict[str, str] = {}
    if benchmark is not None:
        for entry in benchmark.characters:
            tier_of[entry.character] = entry.tier
            for scene in entry.scenes:
                character_of[scene.id] = entry.character
                artifact_of[scene.id] = scene.artifact or benchmark.artifact
                if scene.id not in by_scene:
                    incomplete.append(scene.id)
    for record in records:
        character_of.setdefault(record.scene_id, record.character)

    report = Report(config=config or {}, order_dependent=order_dependent)
    report.record_count = len(records)
    report.forward_passes = sum(r.forward_passes for r in records)
    report.incomplete = sorted(set(incomplete))
    if scene_scores:
        report.mean = _mean(list(scene_scores.values()))

    grouped: dict[str, list[int]] = {}
    for scene_id, score in scene_scores.items():
        grouped.setdefault(character_of.get(scene_id, ""), []).append(score)
    report.per_character = {name: _mean(scores)
                            for name, scores in sorted(grouped.items())
                            if name}

    by_artifact: dict[str, list[int]] = {}
    for scene_id, score in scene_scores.items():
        artifact = artifact_of.get(scene_id)
        if artifact:
            by_artifact.setdefault(artifact, []).append(score)
    report.per_artifact = {name: _mean(scores)
                           for name, scores in sorted(by_artifact.items())}

    by_tier: dict[str, list[int]] = {}
    for name, scores in grouped.items():
        tier = tier_of.get(name)
        if tier:
            by_tier.setdefault(tier, []).extend(scores)
    report.rollups = {tier: _mean(scores)
                      for tier, scores in sorted(by_tier.items())}

    if k is not None:
        for kk in range(1, k + 1):
            at_k = [best_at_k([r.score for r in rows], kk)
                    for rows in by_scene.values() if len(rows) >= need]
            if at_k:
                report.best_at[kk] = _mean(at_k)
    return report


def _mean(values: list[int | float]) -> float:
    return sum(values) / len(values)


def render_report(report: Report) -> str:
    lines = []
    lines.append(f"{'character':<20} {'mean':>8}")
    lines.append("-" * 29)
    for name, value in report.per_character.items():
        lines.append(f"{name:<20} {value:>8.2f}")
    for tier, value in report.rollups.items():
        lines.append(f"{('[' + tier + ']'):<20} {value:>8.2f}")
    for artifact, value in report.per_artifact.items():
        lines.append(f"{('<' + artifact + '>'):<20} {value:>8.2f}")
    if report.mean is not None:
        lines.append(f"{'average':<20} {report.mean:>8.2f}")
    if report.best_at:
        lines.append("")
        lines.append("Best@K")
        for kk, value in sorted(report.best_at.items()):
            lines.append(f"  K={kk:<3d} {value:>8.2f}")
    if report.preference:
        lines.append("")
        win = report.preference.get("win", 0)
        tie = report.preference.get("tie", 0)
        loss = report.preference.get("loss", 0)
        lines.append(f"preference: win {win} / tie {tie} / loss {loss}")
    if report.incomplete:
        lines.append("")
        lines.append("incomplete scenes (excluded from means): "
                     + ", ".join(report.incomplete))
    lines.append("")
    lines.append(f"records: {report.record_count}   "
                 f"forward passes: {report.forward_passes}")
    if report.order_dependent:
        lines.append("note: scores are order-dependent (evolving run)")
    return "\n".join(lines) + "\n"
