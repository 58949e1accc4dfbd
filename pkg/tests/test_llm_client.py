"""Templates, the completion cache, label classification, and provider
transports."""

import threading

import httpx
import pytest

import charlogic.llm.providers as providers_mod
from charlogic.errors import MissingBinding, Unparseable
from charlogic.llm.client import GenerationConfig, LlmClient
from charlogic.llm.providers import (
    EchoProvider, HttpProvider, MockProvider, ProviderError,
    provider_from_spec,
)
from charlogic.llm.templates import (
    TEMPLATE_NAMES, PromptTemplate, load_template, placeholders, render,
)

CFG = GenerationConfig("m", temperature=0.0, max_tokens=64)
T = PromptTemplate("t", "Hello $name, the scene is: $scene")


# --- templates ---

def test_all_shipped_templates_load():
    for name in TEMPLATE_NAMES:
        template = load_template(name)
        assert template.name == name
        assert template.text.strip()


def test_placeholders_extracted():
    assert placeholders(T) == {"name", "scene"}
    assert placeholders(PromptTemplate("t", "${braced} and $plain")) == \
        {"braced", "plain"}


def test_render_fills_bindings():
    assert render(T, {"name": "Ayla", "scene": "dusk"}) == \
        "Hello Ayla, the scene is: dusk"


def test_render_missing_binding_raises():
    with pytest.raises(MissingBinding) as err:
        render(T, {"name": "Ayla"})
    assert "scene" in str(err.value)


def test_unknown_template_name_raises():
    with pytest.raises(KeyError):
        load_template("not-a-template")


# --- cache ---

def test_temperature_zero_hits_cache():
    provider = EchoProvider()
    client = LlmClient(provider)
    first = client.complete(T, {"name": "a", "scene": "b"}, CFG)
    second = client.complete(T, {"name": "a", "scene": "b"}, CFG)
    assert not first.cache_hit and second.cache_hit
    assert second.completion == first.completion
    assert len(provider.calls) == 1
    assert client.forward_passes == 1


def test_nonzero_temperature_skips_cache():
    provider = EchoProvider()
    client = LlmClient(provider)
    warm = GenerationConfig("m", temperature=0.7, max_tokens=64)
    client.complete(T, {"name": "a", "scene": "b"}, warm)
    client.complete(T, {"name": "a", "scene": "b"}, warm)
    assert len(provider.calls) == 2
    assert client.forward_passes == 2


def test_cache_key_varies_with_model_and_params():
    provider = EchoProvider()
    client = LlmClient(provider)
    client.complete(T, {"name": "a", "scene": "b"}, CFG)
    client.complete(T, {"name": "a", "scene": "b"},
                    GenerationConfig("m2", temperature=0.0, max_tokens=64))
    client.complete(T, {"name": "a", "scene": "b"},
                    GenerationConfig("m", temperature=0.0, max_tokens=65))
    assert len(provider.calls) == 3


def test_disk_cache_survives_new_client(tmp_path):
    cache = tmp_path / "cache"
    first = LlmClient(EchoProvider(), cache_dir=cache)
    first.complete(T, {"name": "a", "scene": "b"}, CFG)
    assert list(cache.glob("*.json"))
    provider = EchoProvider()
    second = LlmClient(provider, cache_dir=cache)
    exchange = second.complete(T, {"name": "a", "scene": "b"}, CFG)
    assert exchange.cache_hit
    assert provider.calls == []


def test_thread_local_forward_passes():
    client = LlmClient(EchoProvider())
    seen: dict[str, int] = {}

    def work(name: str, count: int) -> None:
        before = client.thread_forward_passes
        for i in range(count):
            client.complete(T, {"name": f"{name}{i}", "scene": "s"}, CFG)
        seen[name] = client.thread_forward_passes - before

    threads = [threading.Thread(target=work, args=("a", 3)),
               threading.Thread(target=work, args=("b", 5))]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert seen == {"a": 3, "b": 5}
    assert client.forward_passes == 8


# --- classification ---

LABELS = ["entailed", "neutral", "contradicted"]


def scored_provider(scores, text="entailed"):
    return MockProvider([{"contains": "", "completion": text,
                          "scores": scores}])


def test_classify_uses_token_scores():
    provider = scored_provider({"neutral": -0.2, "ent": -0.9}, text="junk")
    label, scores = LlmClient(provider).classify(T, {"name": "a",
                                                     "scene": "b"},
                                                 LABELS, CFG)
    assert label == "neutral"
    assert scores["neutral"] == -0.2
    assert scores["entailed"] == -0.9  # "ent" prefixes "entailed"
    assert scores["contradicted"] == float("-inf")


def test_classify_token_matching_is_case_insensitive():
    provider = scored_provider({" Ent": -0.1, "neu": -3.0}, text="junk")
    label, _ = LlmClient(provider).classify(T, {"name": "a", "scene": "b"},
                                            LABELS, CFG)
    assert label == "entailed"


def test_classify_falls_back_to_exact_first_word():
    provider = MockProvider([{"contains": "", "completion": "No."}])
    label, scores = LlmClient(provider).classify(
        T, {"name": "a", "scene": "b"}, ["yes", "no", "unknown"], CFG)
    assert label == "no"
    assert scores["no"] == 0.0


def test_classify_unparseable():
    provider = MockProvider([{"contains": "",
                              "completion": "cannot say anything"}])
    with pytest.raises(Unparseable):
        LlmClient(provider).classify(T, {"name": "a", "scene": "b"},
                                     LABELS, CFG)


def test_classify_rejects_duplicate_labels():
    with pytest.raises(ValueError):
        LlmClient(EchoProvider()).classify(T, {"name": "a", "scene": "b"},
                                           ["x", "x"], CFG)


# --- providers ---

def test_mock_provider_first_match_wins():
    provider = MockProvider([
        {"contains": ["alpha", "beta"], "completion": "both"},
        {"contains": "alpha", "completion": "just alpha"},
    ])
    assert provider.complete("alpha beta", temperature=0,
                             max_tokens=8).text == "both"
    assert provider.complete("alpha only", temperature=0,
                             max_tokens=8).text == "just alpha"


def test_mock_provider_miss_raises():
    provider = MockProvider([{"contains": "needle", "completion": "x"}])
    with pytest.raises(ProviderError):
        provider.complete("haystack", temperature=0, max_tokens=8)


def test_provider_from_spec(tmp_path):
    script = tmp_path / "mock.json"
    script.write_text('[{"contains": "", "completion": "hi"}]',
                      encoding="utf-8")
    provider = provider_from_spec(f"mock:{script}")
    assert isinstance(provider, MockProvider)
    assert isinstance(provider_from_spec("echo"), EchoProvider)
    with pytest.raises(ValueError):
        provider_from_spec("wat")


def _http_provider(handler, monkeypatch):
    monkeypatch.setattr(providers_mod, "BACKOFF_BASE_S", 0.0)
    provider = HttpProvider(base_url="http://llm.test", model="m")
    provider._client = httpx.Client(
        transport=httpx.MockTransport(handler), base_url="http://llm.test")
    return provider


def test_http_provider_parses_reply(monkeypatch):
    def handler(request):
        return httpx.Response(200, json={
            "choices": [{"message": {"content": "hello there"},
                         "logprobs": {"content": [{
                             "token": "hello", "logprob": -0.1,
                             "top_logprobs": [
                                 {"token": "hello", "logprob": -0.1},
                                 {"token": "hi", "logprob": -2.3}]}]}}],
            "usage": {"prompt_tokens": 5, "completion_tokens": 2}})

    reply = _http_provider(handler, monkeypatch).complete(
        "p", temperature=0.0, max_tokens=8, top_logprobs=4)
    assert reply.text == "hello there"
    assert reply.prompt_tokens == 5
    assert reply.top_logprobs == {"hello": -0.1, "hi": -2.3}


def test_http_provider_retries_on_429(monkeypatch):
    calls = {"n": 0}

    def handler(request):
        calls["n"] += 1
        if calls["n"] < 3:
            return httpx.Response(429)
        return httpx.Response(200, json={
            "choices": [{"message": {"content": "ok"}}]})

    reply = _http_provider(handler, monkeypatch).complete(
        "p", temperature=0.0, max_tokens=8)
    assert reply.text == "ok"
    assert calls["n"] == 3


def test_http_provider_gives_up_after_max_attempts(monkeypatch):
    calls = {"n": 0}

    def handler(request):
        calls["n"] += 1
        return httpx.Response(500)

    with pytest.raises(ProviderError):
        _http_provider(handler, monkeypatch).complete(
            "p", temperature=0.0, max_tokens=8)
    assert calls["n"] == providers_mod.MAX_ATTEMPTS


def test_http_provider_does_not_retry_client_errors(monkeypatch):
    calls = {"n": 0}

    def handler(request):
        calls["n"] += 1
        return httpx.Response(400, text="bad request")

    with pytest.raises(ProviderError):
        _http_provider(handler, monkeypatch).complete(
            "p", temperature=0.0, max_tokens=8)
    assert calls["n"] == 1
