"""Generation client: rendering, caching, classification, accounting.

Only temperature-0 calls are cached (stochastic calls must stay
stochastic). The cache is content-addressed JSON on disk plus an
in-memory mirror; the key covers model, prompt, temperature and
max_tokens. Every call is recorded as an LlmExchange; the number of
non-cached exchanges is the run's forward-pass count.
"""

from __future__ import annotations

import hashlib
import json
import string
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from ..errors import Unparseable
from .providers import Provider, ProviderReply
from .templates import PromptTemplate, render

CACHE_DIR_NAME = ".cp-cache"


@dataclass(frozen=True)
class GenerationConfig:
    model_name: str
    temperature: float = 0.0
    max_tokens: int = 512
    top_logprobs: int | None = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class LlmExchange:
    template_name: str
    prompt: str
    completion: str
    prompt_tokens: int
    completion_tokens: int
    latency_s: float
    cache_hit: bool


class LlmClient:
    def __init__(self, provider: Provider,
                 cache_dir: str | Path | None = None,
                 max_concurrency: int = 4):
        self.provider = provider
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._memory: dict[str, dict] = {}
        self._lock = threading.Lock()
        self._gate = threading.Semaphore(max_concurrency)
        self._tls = threading.local()
        self.exchanges: list[LlmExchange] = []

    @property
    def forward_passes(self) -> int:
        with self._lock:
            return sum(1 for e in self.exchanges if not e.cache_hit)

    @property
    def thread_forward_passes(self) -> int:
        """Non-cached calls made from the current thread. Lets callers
        take exact per-call deltas while scenes run in parallel."""
        return getattr(self._tls, "count", 0)

    def complete(self, template: PromptTemplate, bindings: dict[str, str],
                 config: GenerationConfig) -> LlmExchange:
        exchange, _ = self._call(template, bindings, config)
        return exchange

    def classify(self, template: PromptTemplate, bindings: dict[str, str],
                 labels: list[str],
                 config: GenerationConfig) -> tuple[str, dict[str, float]]:
        label, scores, _ = self.classify_ex(template, bindings, labels,
                                            config)
        return label, scores

    def classify_ex(
        self, template: PromptTemplate, bindings: dict[str, str],
        labels: list[str], config: GenerationConfig,
    ) -> tuple[str, dict[str, float], LlmExchange]:
        """Pick one of `labels`. Prefers provider token log-scores (argmax
        over each label's first-token score); falls back to exact-match
        parsing of the completion. Raises Unparseable when neither works.
        """
        if not labels:
            raise ValueError("labels must be non-empty")
        if len(set(labels)) != len(labels):
            raise ValueError("labels must be distinct")
        if config.top_logprobs is None:
            config = GenerationConfig(config.model_name, config.temperature,
                                      config.max_tokens,
                                      top_logprobs=max(8, 2 * len(labels)))
        exchange, top = self._call(template, bindings, config)
        if top:
            scores = {label: max((lp for token, lp in top.items()
                                  if _token_matches(token, label)),
                                 default=float("-inf"))
                      for label in labels}
            if any(s > float("-inf") for s in scores.values()):
                best = max(labels, key=lambda lab: scores[lab])
                return best, scores, exchange
        parsed = _parse_label(exchange.completion, labels)
        if parsed is None:
            raise Unparseable(
                f"completion matches no label in {labels}: "
                f"{exchange.completion[:120]!r}")
        return (parsed,
                {label: (0.0 if label == parsed else float("-inf"))
                 for label in labels},
                exchange)

    # --- internals ---

    def _call(self, template: PromptTemplate, bindings: dict[str, str],
              config: GenerationConfig) -> tuple[LlmExchange,
                                                 dict[str, float] | None]:
        prompt = render(template, bindings)
        cacheable = config.temperature == 0.0
        key = self._cache_key(prompt, config) if cacheable else None
        if key is not None:
            hit = self._cache_get(key)
            if hit is not None:
                exchange = LlmExchange(
                    template.name, prompt, hit["completion"],
                    hit["prompt_tokens"], hit["completion_tokens"],
                    latency_s=0.0, cache_hit=True)
                self._record(exchange)
                return exchange, hit.get("top_logprobs")
        start = time.perf_counter()
        with self._gate:
            reply = self.provider.complete(
                prompt, temperature=config.temperature,
                max_tokens=config.max_tokens,
                top_logprobs=config.top_logprobs)
        latency = time.perf_counter() - start
        if key is not None:
            self._cache_put(key, reply)
        exchange = LlmExchange(template.name, prompt, reply.text,
                               reply.prompt_tokens, reply.completion_tokens,
                               latency_s=latency, cache_hit=False)
        self._record(exchange)
        return exchange, reply.top_logprobs

    def _record(self, exchange: LlmExchange) -> None:
        with self._lock:
            self.exchanges.append(exchange)
        if not exchange.cache_hit:
            self._tls.count = getattr(self._tls, "count", 0) + 1

    @staticmethod
    def _cache_key(prompt: str, config: GenerationConfig) -> str:
        blob = "\x1f".join((config.model_name, str(config.temperature),
                            str(config.max_tokens), prompt))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def _cache_get(self, key: str) -> dict | None:
        with self._lock:
            if key in self._memory:
                return self._memory[key]
        if self.cache_dir is None:
            return None
        path = self.cache_dir / f"{key}.json"
        if not path.exists():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        with self._lock:
            self._memory[key] = entry
        return entry

    def _cache_put(self, key: str, reply: ProviderReply) -> None:
        entry = {
            "completion": reply.text,
            "prompt_tokens": reply.prompt_tokens,
            "completion_tokens": reply.completion_tokens,
            "top_logprobs": reply.top_logprobs,
        }
        with self._lock:
            self._memory[key] = entry
        if self.cache_dir is not None:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
            path = self.cache_dir / f"{key}.json"
            path.write_text(json.dumps(entry, ensure_ascii=False),
                            encoding="utf-8")


def _token_matches(token: str, label: str) -> bool:
    t = token.strip().casefold()
    return bool(t) and label.casefold().startswith(t)


def _parse_label(completion: str, labels: list[str]) -> str | None:
    words = completion.split()
    if not words:
        return None
    first = words[0].strip(string.punctuation + string.whitespace).casefold()
    for label in labels:
        if first == label.casefold():
            return label
    return None
