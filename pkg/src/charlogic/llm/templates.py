"""Prompt templates with named placeholders.

Templates ship as plain text files under charlogic/prompts/ so their
wording can be edited without touching code. Placeholders use
string.Template syntax ($name); render() refuses to proceed while any
placeholder is unfilled.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from string import Template

from ..errors import MissingBinding

TEMPLATE_NAMES = (
    "role_play", "cot", "codify", "blame", "revise", "nli", "preference",
    "condition", "scene_extract", "guiding_question", "spoiler_filter",
)


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    text: str


def load_template(name: str, directory: Path | None = None) -> PromptTemplate:
    if name not in TEMPLATE_NAMES:
        raise KeyError(f"unknown template {name!r}; "
                       f"expected one of {', '.join(TEMPLATE_NAMES)}")
    if directory is not None:
        text = (Path(directory) / f"{name}.txt").read_text(encoding="utf-8")
    else:
        text = (resources.files("charlogic") / "prompts" /
                f"{name}.txt").read_text(encoding="utf-8")
    return PromptTemplate(name, text)


def placeholders(template: PromptTemplate) -> set[str]:
    # Template.get_identifiers() needs 3.11; walk the pattern by hand
    names: set[str] = set()
    for match in Template.pattern.finditer(template.text):
        name = match.group("named") or match.group("braced")
        if name:
            names.add(name)
    return names


def render(template: PromptTemplate, bindings: dict[str, str]) -> str:
    missing = placeholders(template) - set(bindings)
    if missing:
        raise MissingBinding(
            f"template {template.name!r} is missing bindings for: "
            + ", ".join(sorted(missing)))
    return Template(template.text).safe_substitute(bindings)
