"""Provider-agnostic text generation and classification."""

from .templates import (
    TEMPLATE_NAMES, PromptTemplate, load_template, placeholders, render,
)
from .providers import (
    EchoProvider, HttpProvider, MockProvider, ProviderError, ProviderReply,
    provider_from_spec,
)
from .client import GenerationConfig, LlmClient, LlmExchange

__all__ = [
    "TEMPLATE_NAMES", "PromptTemplate", "load_template", "placeholders",
    "render",
    "EchoProvider", "HttpProvider", "MockProvider", "ProviderError",
    "ProviderReply", "provider_from_spec",
    "GenerationConfig", "LlmClient", "LlmExchange",
]
