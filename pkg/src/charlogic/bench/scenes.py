"""Scene construction from episode summaries, and spoiler filtering.

Scene extraction is extractive by contract: the LLM may only copy action
sentences verbatim, and anything that is not a substring of the summary
is dropped. The guiding question is checked against a leak heuristic
(no shared content word of six letters or more with the reference
action) and logged when it fails; the question is kept either way, since
no automatic judge of "hinting" exists.
"""

from __future__ import annotations

import logging
import os
import re

from ..codifier.segment import Profile
from ..engine.types import Scene
from ..errors import OverAggressiveFilter, Unparseable
from ..llm.client import GenerationConfig, LlmClient
from ..llm.providers import ProviderError
from ..llm.templates import load_template

log = logging.getLogger(__name__)


def _default_config(max_tokens: int = 512) -> GenerationConfig:
    return GenerationConfig(os.environ.get("CP_LLM_MODEL", ""),
                            temperature=0.0, max_tokens=max_tokens)


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-") or "character"


_WORD_RE = re.compile(r"[A-Za-z]{6,}")


def question_leaks(question: str, reference_action: str) -> bool:
    """Judge-free leak heuristic: a shared content word of >= 6 letters."""
    question_words = {w.casefold() for w in _WORD_RE.findall(question)}
    action_words = {w.casefold() for w in _WORD_RE.findall(reference_action)}
    return bool(question_words & action_words)


def build_scenes(episode_summary: str, character: str, llm: LlmClient,
                 artifact: str = "",
                 config: GenerationConfig | None = None) -> list[Scene]:
    if not episode_summary.strip():
        raise ValueError("episode summary must be non-empty")
    config = config or _default_config()
    extract = llm.complete(load_template("scene_extract"), {
        "character": character,
        "summary": episode_summary,
    }, config)
    lines = [line.strip() for line in extract.completion.splitlines()
             if line.strip()]
    if lines == ["none"] or not lines:
        log.warning("no action sentences extracted for %s", character)
        return []

    located: list[tuple[int, str]] = []
    seen_offsets: set[int] = set()
    for line in lines:
        offset = episode_summary.find(line)
        if offset < 0:
            log.warning("extractor paraphrased (not a substring), dropped: "
                        "%r", line[:80])
            continue
        if offset in seen_offsets:
            continue
        seen_offsets.add(offset)
        located.append((offset, line))
    located.sort()

    question_template = load_template("guiding_question")
    scenes: list[Scene] = []
    slug = _slug(character)
    for order_index, (offset, action) in enumerate(located):
        context = episode_summary[:offset].strip()
        if not context:
            log.warning("no preceding context for action %r; skipped",
                        action[:60])
            continue
        reply = llm.complete(question_template, {
            "character": character,
            "context": context,
            "action": action,
        }, config)
        question = reply.completion.strip().splitlines()[0].strip() \
            if reply.completion.strip() else ""
        if question and question_leaks(question, action):
            log.warning("guiding question may hint at the answer "
                        "(shared content word): %r", question)
        scenes.append(Scene(
            id=f"{slug}-{order_index:03d}",
            context=context,
            question=question,
            reference_action=action,
            artifact=artifact,
            character=character,
            order_index=order_index,
        ))
    return scenes


def filter_spoilers(profile: Profile, cutoff_order: int, llm: LlmClient,
                    override: bool = False,
                    config: GenerationConfig | None = None) -> Profile:
    if cutoff_order < 0:
        raise ValueError("cutoff_order must be >= 0")
    if not profile.segments:
        return profile
    config = config or _default_config(max_tokens=128)
    listing = "\n".join(f"{segment.id}: {segment.text}"
                        for segment in profile.segments)
    try:
        reply = llm.complete(load_template("spoiler_filter"), {
            "character": profile.character,
            "cutoff": str(cutoff_order),
            "segments": listing,
        }, config)
    except (ProviderError, Unparseable) as err:
        log.warning("spoiler filter unavailable (%s); profile kept "
                    "unfiltered", err)
        return profile
    answer = reply.completion.strip()
    known = {segment.id for segment in profile.segments}
    flagged = [] if answer.lower() == "none" else \
        [line.strip() for line in answer.splitlines()
         if line.strip() in known]
    if not flagged:
        return profile
    if len(flagged) > len(profile.segments) / 2 and not override:
        raise OverAggressiveFilter(
            f"filter flagged {len(flagged)} of {len(profile.segments)} "
            "segments; pass override to allow")
    log.info("spoiler filter removed segments: %s", ", ".join(flagged))
    remaining = tuple(segment for segment in profile.segments
                      if segment.id not in flagged)
    return Profile(
        character=profile.character,
        artifact=profile.artifact,
        text="\n\n".join(segment.text for segment in remaining),
        segments=remaining,
    )
