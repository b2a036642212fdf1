"""LLM clients: the task interface, a deterministic scripted client, and a
configuration-driven HTTP adapter for chat-completion providers."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import httpx

from .orchestrator import Message, Role


class ClientError(RuntimeError):
    """Transport, credential, or scripting failure while invoking the LLM."""

    def __init__(self, message: str, retryable: bool = False) -> None:
        super().__init__(message)
        self.retryable = retryable


class LlmClient(Protocol):
    def complete(self, prompt: Sequence[Message]) -> str: ...


@dataclass
class ScriptedClient:
    """Replays canned responses in order; records every prompt it was given."""

    responses: list[str]
    repeat_last: bool = False
    calls: list[tuple[Message, ...]] = field(default_factory=list)

    def complete(self, prompt: Sequence[Message]) -> str:
        self.calls.append(tuple(prompt))
        index = len(self.calls) - 1
        if index >= len(self.responses):
            if self.repeat_last and self.responses:
                return self.responses[-1]
            raise ClientError("scripted transcript exhausted", retryable=False)
        return self.responses[index]


def load_transcript(path: str) -> list[str]:
    """Scripted-client transcript: one JSON-escaped response per line."""
    responses = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                decoded = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ClientError(f"transcript line {line_no} is not a JSON string: {exc}") from exc
            if not isinstance(decoded, str):
                raise ClientError(f"transcript line {line_no} must decode to a string")
            responses.append(decoded)
    return responses


# Known chat-completion providers; all speak the same request shape.
PROVIDER_PRESETS = {
    "openai": {
        "endpoint": "https://api.openai.com/v1/chat/completions",
        "key_env": "OPENAI_API_KEY",
    },
    "deepseek": {
        "endpoint": "https://api.deepseek.com/chat/completions",
        "key_env": "DEEPSEEK_API_KEY",
    },
    "google": {
        "endpoint": "https://generativelanguage.googleapis.com/v1beta/openai/chat/completions",
        "key_env": "GOOGLE_API_KEY",
    },
}

_ROLE_MAP = {
    Role.DOMAIN_EXPERT: "user",
    Role.ASSISTANT: "assistant",
    Role.SERVICE: "system",
}


@dataclass
class ProviderConfig:
    provider: str
    model: str
    api_key: str | None = None
    endpoint: str | None = None
    timeout: float = 60.0

    def resolve_endpoint(self) -> str:
        if self.endpoint:
            return self.endpoint
        preset = PROVIDER_PRESETS.get(self.provider)
        if preset is None:
            raise ClientError(f"unknown provider {self.provider!r} and no endpoint given")
        return preset["endpoint"]

    def resolve_key(self) -> str:
        if self.api_key:
            return self.api_key
        preset = PROVIDER_PRESETS.get(self.provider)
        env = preset["key_env"] if preset else None
        key = os.environ.get(env) if env else None
        if not key:
            raise ClientError(
                f"no API key for provider {self.provider!r}"
                + (f" (set {env})" if env else ""),
                retryable=False,
            )
        return key


def shape_request(config: ProviderConfig, prompt: Sequence[Message]) -> dict:
    return {
        "model": config.model,
        "messages": [{"role": _ROLE_MAP[m.role], "content": m.text} for m in prompt],
    }


@dataclass
class HttpChatClient:
    """Thin adapter for OpenAI-style chat-completion endpoints."""

    config: ProviderConfig

    def complete(self, prompt: Sequence[Message]) -> str:
        key = self.config.resolve_key()
        try:
            response = httpx.post(
                self.config.resolve_endpoint(),
                json=shape_request(self.config, prompt),
                headers={"Authorization": f"Bearer {key}"},
                timeout=self.config.timeout,
            )
        except httpx.TimeoutException as exc:
            raise ClientError(f"LLM request timed out: {exc}", retryable=True) from exc
        except httpx.HTTPError as exc:
            raise ClientError(f"LLM transport failure: {exc}", retryable=True) from exc
        if response.status_code in (401, 403):
            raise ClientError(f"credential rejected ({response.status_code})", retryable=False)
        if response.status_code != 200:
            raise ClientError(
                f"provider returned {response.status_code}: {response.text[:200]}",
                retryable=response.status_code >= 500,
            )
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, ValueError) as exc:
            raise ClientError(f"unexpected provider payload: {exc}") from exc


def build_client(spec: str, api_key: str | None = None) -> LlmClient:
    """CLI client spec: "scripted:<transcript path>" or "<provider>:<model>"."""
    kind, _, rest = spec.partition(":")
    if not rest:
        raise ClientError(f"client spec {spec!r} must look like scripted:FILE or provider:model")
    if kind == "scripted":
        return ScriptedClient(load_transcript(rest), repeat_last=True)
    return HttpChatClient(ProviderConfig(provider=kind, model=rest, api_key=api_key))
