"""Completion providers: a scripted in-process mock, a prompt echo, and
an HTTP chat-completion client.

The mock is keyed by prompt substrings so tests can route different
pipeline stages to different canned answers with zero network. Entries
match in order; list the most specific first and a catch-all last.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from ..errors import CharlogicError

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 5
BACKOFF_BASE_S = 0.5


class ProviderError(CharlogicError):
    """Transport exhausted retries, or the reply body made no sense."""


@dataclass(frozen=True)
class ProviderReply:
    text: str
    prompt_tokens: int
    completion_tokens: int
    top_logprobs: dict[str, float] | None = None


class Provider(Protocol):
    def complete(self, prompt: str, *, temperature: float, max_tokens: int,
                 top_logprobs: int | None = None) -> ProviderReply: ...


def _count_tokens(text: str) -> int:
    # whitespace tokens are a fine budget proxy for the mock paths
    return len(text.split())


@dataclass
class MockProvider:
    """Scripted provider. Each entry:
        {"contains": str | [str, ...], "completion": str,
         "scores": {token: logprob, ...}?}
    The first entry whose every substring occurs in the prompt wins.
    """
    entries: list[dict]
    calls: list[str] = field(default_factory=list)

    @classmethod
    def from_file(cls, path: str | Path) -> "MockProvider":
        entries = json.loads(Path(path).read_text(encoding="utf-8"))
        if not isinstance(entries, list):
            raise ValueError(f"mock script {path} must be a JSON array")
        return cls(entries)

    def complete(self, prompt: str, *, temperature: float, max_tokens: int,
                 top_logprobs: int | None = None) -> ProviderReply:
        self.calls.append(prompt)
        for entry in self.entries:
            needles = entry.get("contains", "")
            if isinstance(needles, str):
                needles = [needles]
            if all(needle in prompt for needle in needles):
                text = entry["completion"]
                return ProviderReply(
                    text=text,
                    prompt_tokens=_count_tokens(prompt),
                    completion_tokens=_count_tokens(text),
                    top_logprobs=(entry.get("scores")
                                  if top_logprobs else None),
                )
        head = prompt[:160].replace("\n", " ")
        raise ProviderError(f"mock script has no entry matching prompt: "
                            f"{head!r}...")


@dataclass
class EchoProvider:
    """Returns the rendered prompt as the completion. Test double."""
    calls: list[str] = field(default_factory=list)

    def complete(self, prompt: str, *, temperature: float, max_tokens: int,
                 top_logprobs: int | None = None) -> ProviderReply:
        self.calls.append(prompt)
        return ProviderReply(prompt, _count_tokens(prompt),
                             _count_tokens(prompt))


class HttpProvider:
    """Chat-completion wire format against a configurable base URL."""

    def __init__(self, base_url: str | None = None,
                 api_key: str | None = None, model: str | None = None,
                 timeout_s: float = 60.0):
        self.base_url = (base_url or os.environ.get("CP_LLM_BASE_URL")
                         or "").rstrip("/")
        if not self.base_url:
            raise ProviderError("no base URL: set CP_LLM_BASE_URL")
        self.api_key = api_key or os.environ.get("CP_LLM_API_KEY", "")
        self.model = model or os.environ.get("CP_LLM_MODEL", "")
        self._client = httpx.Client(timeout=timeout_s)

    def complete(self, prompt: str, *, temperature: float, max_tokens: int,
                 top_logprobs: int | None = None) -> ProviderReply:
        payload: dict = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        if top_logprobs:
            payload["logprobs"] = True
            payload["top_logprobs"] = top_logprobs
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = self._post_with_retries(payload, headers)
        return self._parse(body)

    def _post_with_retries(self, payload: dict, headers: dict) -> dict:
        url = f"{self.base_url}/chat/completions"
        last_error: Exception | None = None
        for attempt in range(MAX_ATTEMPTS):
            if attempt:
                time.sleep(BACKOFF_BASE_S * 2 ** (attempt - 1))
            try:
                response = self._client.post(url, json=payload,
                                             headers=headers)
            except httpx.TransportError as err:
                last_error = err
                log.warning("transport error (attempt %d/%d): %s",
                            attempt + 1, MAX_ATTEMPTS, err)
                continue
            if response.status_code == 429 or response.status_code >= 500:
                last_error = ProviderError(
                    f"HTTP {response.status_code} from provider")
                log.warning("retryable status %d (attempt %d/%d)",
                            response.status_code, attempt + 1, MAX_ATTEMPTS)
                continue
            if response.status_code != 200:
                raise ProviderError(
                    f"HTTP {response.status_code}: {response.text[:200]}")
            return response.json()
        raise ProviderError(
            f"provider unreachable after {MAX_ATTEMPTS} attempts: "
            f"{last_error}")

    @staticmethod
    def _parse(body: dict) -> ProviderReply:
        try:
            choice = body["choices"][0]
            text = choice["message"]["content"]
            usage = body.get("usage", {})
            top: dict[str, float] | None = None
            logprobs = choice.get("logprobs")
            if logprobs and logprobs.get("content"):
                first = logprobs["content"][0]
                top = {c["token"]: c["logprob"]
                       for c in first.get("top_logprobs", [])}
                top.setdefault(first["token"], first["logprob"])
            return ProviderReply(
                text=text,
                prompt_tokens=usage.get("prompt_tokens", 0),
                completion_tokens=usage.get("completion_tokens", 0),
                top_logprobs=top,
            )
        except (KeyError, IndexError, TypeError) as err:
            raise ProviderError(f"malformed provider response: {err}") from err


def provider_from_spec(spec: str) -> Provider:
    """Build a provider from a CLI-style spec: "http" or "mock:<script>"."""
    if spec == "http":
        return HttpProvider()
    if spec == "echo":
        return EchoProvider()
    if spec.startswith("mock:"):
        return MockProvider.from_file(spec[len("mock:"):])
    raise ValueError(f"unknown provider spec {spec!r}; "
                     "use http, echo, or mock:<script.json>")
