"""LLM agent backends: chat-completions HTTP client and fixture replay."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import requests

from .types import TransportError

ENV_URL = "MEO_LLM_URL"
ENV_KEY = "MEO_LLM_KEY"
DEFAULT_MODEL = "gpt-4"
DEFAULT_TIMEOUT = 60.0


def message_hash(messages: list) -> str:
    canonical = json.dumps(messages, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


class HttpBackend:
    """POSTs {model, messages, temperature} to a chat-completions endpoint."""

    def __init__(self, url: str | None = None, api_key: str | None = None,
                 model: str = DEFAULT_MODEL):
        self.url = url or os.environ.get(ENV_URL)
        self.api_key = api_key or os.environ.get(ENV_KEY)
        self.model = model
        if not self.url:
            raise TransportError(f"no LLM endpoint configured (set {ENV_URL})")

    def complete(self, messages: list, temperature: float = 0.0,
                 timeout: float = DEFAULT_TIMEOUT) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            resp = requests.post(
                self.url,
                json={"model": self.model, "messages": messages,
                      "temperature": temperature},
                headers=headers, timeout=timeout)
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except requests.RequestException as e:
            raise TransportError(f"LLM backend request failed: {e}") from e
        except (KeyError, IndexError, ValueError) as e:
            raise TransportError(f"malformed LLM backend response: {e}") from e


class ReplayBackend:
    """Deterministic mock keyed by a hash of the message list."""

    def __init__(self, fixtures: dict | str | Path):
        if not isinstance(fixtures, dict):
            fixtures = json.loads(Path(fixtures).read_text())
        self.fixtures = dict(fixtures)

    def complete(self, messages: list, temperature: float = 0.0,
                 timeout: float = DEFAULT_TIMEOUT) -> str:
        key = message_hash(messages)
        try:
            return self.fixtures[key]
        except KeyError:
            tail = messages[-1]["content"] if messages else ""
            raise TransportError(
                f"no replay fixture for message hash {key} "
                f"(last message: {tail[:120]!r})") from None


class ScriptedBackend:
    """Returns canned responses in order; for retry-contract tests."""

    def __init__(self, responses: list):
        self.responses = list(responses)
        self.calls = 0

    def complete(self, messages: list, temperature: float = 0.0,
                 timeout: float = DEFAULT_TIMEOUT) -> str:
        if not self.responses:
            raise TransportError("scripted backend exhausted")
        self.calls += 1
        return self.responses.pop(0)
