"""Versioned on-disk store for a character's codified profile.

Layout mirrors a commit log so diffs are inspectable with plain tools:

    <root>/<character>/v0/<segment_id>.cpl    codifier output
    <root>/<character>/v0/manifest.json       granularity, model, order, attempts
    <root>/<character>/v<N>/<segment_id>.cpl  every version fully materialized
    <root>/<character>/revisions.jsonl        one Revision per line

Adjacent versions differ in exactly one segment's source; commit()
enforces that by construction and verifies the new source parses clean.
Program files are UTF-8 with LF newlines.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from pathlib import Path

from ..dsl.ast import Program
from ..dsl.parser import parse


@dataclass(frozen=True)
class Revision:
    version: int            # the version this revision created
    scene_id: str
    blamed_segment: str
    issue: str              # "contradicted" | "neutral"
    old_source: str
    new_source: str
    rationale: str


_VDIR_RE = re.compile(r"v(\d+)$")


class VersionStore:
    def __init__(self, root: str | Path, character: str):
        self.root = Path(root)
        self.character = character
        self.path = self.root / character
        if not (self.path / "v0").is_dir():
            raise FileNotFoundError(
                f"no version 0 for {character!r} under {self.root}")
        manifest = json.loads(
            (self.path / "v0" / "manifest.json").read_text(encoding="utf-8"))
        self.segment_order: list[str] = manifest["segment_order"]
        self.manifest = manifest

    # --- creation ---

    @classmethod
    def init(cls, root: str | Path, character: str,
             sources: dict[str, str], segment_order: list[str],
             manifest_extra: dict | None = None) -> "VersionStore":
        """Write version 0 from codifier output."""
        if set(sources) != set(segment_order):
            raise ValueError("segment_order must cover exactly the sources")
        for segment_id, source in sources.items():
            result = parse(source, segment_id)
            if not isinstance(result, Program):
                raise ValueError(
                    f"segment {segment_id!r} source does not parse: "
                    f"{result[0]}")
        v0 = Path(root) / character / "v0"
        v0.mkdir(parents=True, exist_ok=True)
        for segment_id in segment_order:
            _write_cpl(v0 / f"{segment_id}.cpl", sources[segment_id])
        manifest = {"character": character,
                    "segment_order": segment_order,
                    **(manifest_extra or {})}
        (v0 / "manifest.json").write_text(
            json.dumps(manifest, indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8")
        return cls(root, character)

    # --- reading ---

    @property
    def versions(self) -> list[int]:
        found = []
        for child in self.path.iterdir():
            match = _VDIR_RE.fullmatch(child.name)
            if match and child.is_dir():
                found.append(int(match.group(1)))
        return sorted(found)

    @property
    def latest_version(self) -> int:
        return self.versions[-1]

    def sources(self, version: int | None = None) -> dict[str, str]:
        v = self.latest_version if version is None else version
        vdir = self.path / f"v{v}"
        if not vdir.is_dir():
            raise FileNotFoundError(f"no version {v} for {self.character!r}")
        return {segment_id: (vdir / f"{segment_id}.cpl").read_text(
                    encoding="utf-8")
                for segment_id in self.segment_order}

    def programs(self, version: int | None = None) -> list[Program]:
        out = []
        for segment_id, source in self.sources(version).items():
            result = parse(source, segment_id)
            if not isinstance(result, Program):
                raise ValueError(f"stored segment {segment_id!r} does not "
                                 f"parse: {result[0]}")
            out.append(result)
        return out

    def revisions(self) -> list[Revision]:
        path = self.path / "revisions.jsonl"
        if not path.exists():
            return []
        out = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                out.append(Revision(**json.loads(line)))
        return out

    # --- writing ---

    def commit(self, revision: Revision) -> int:
        current = self.latest_version
        sources = self.sources(current)
        if revision.blamed_segment not in sources:
            raise KeyError(f"unknown segment {revision.blamed_segment!r}")
        if sources[revision.blamed_segment] != revision.old_source:
            raise ValueError("revision.old_source does not match the "
                             "current version")
        result = parse(revision.new_source, revision.blamed_segment)
        if not isinstance(result, Program):
            raise ValueError(f"revision source does not parse: {result[0]}")
        new_version = current + 1
        if revision.version != new_version:
            raise ValueError(f"revision.version must be {new_version}")
        vdir = self.path / f"v{new_version}"
        vdir.mkdir()
        for segment_id in self.segment_order:
            source = (revision.new_source
                      if segment_id == revision.blamed_segment
                      else sources[segment_id])
            _write_cpl(vdir / f"{segment_id}.cpl", source)
        with (self.path / "revisions.jsonl").open("a",
                                                  encoding="utf-8") as fh:
            fh.write(json.dumps(asdict(revision), ensure_ascii=False) + "\n")
        return new_version


def _write_cpl(path: Path, source: str) -> None:
    if not source.endswith("\n"):
        source += "\n"
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(source)


def list_characters(root: str | Path) -> list[str]:
    base = Path(root)
    if not base.is_dir():
        return []
    return sorted(child.name for child in base.iterdir()
                  if (child / "v0" / "manifest.json").exists())
