"""Uniform chat interface: an HTTP chat-completion client plus a scripted mock.

Both backends take a full message history and return one assistant message.
Contents pass through byte-exactly in both directions; the transcript a
caller records is exactly what went over the wire.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass
from urllib.parse import urlparse

import requests

VALID_ROLES = ("system", "user", "assistant")


class GatewayError(Exception):
    pass


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self) -> None:
        if self.role not in VALID_ROLES:
            raise ValueError(f"invalid role {self.role!r}")


@dataclass(frozen=True)
class ModelHandle:
    model_id: str
    endpoint: str
    auth_ref: str | None = None
    temperature: float = 0.2
    max_tokens: int = 4096
    timeout_s: int = 60
    seed: int | None = None

    def __post_init__(self) -> None:
        parsed = urlparse(self.endpoint)
        if not parsed.scheme or not parsed.netloc:
            raise ValueError(f"invalid endpoint URL {self.endpoint!r}")
        if self.timeout_s <= 0:
            raise ValueError("timeout_s must be positive")


class ScriptedModel:
    """Deterministic offline backend: replies from a fixed response list."""

    def __init__(self, script: list[str], model_id: str = "scripted"):
        self.script = list(script)
        self.cursor = 0
        self.model_id = model_id

    def next_response(self) -> str:
        if self.cursor >= len(self.script):
            raise GatewayError(f"{self.model_id}: script exhausted after {self.cursor} responses")
        response = self.script[self.cursor]
        self.cursor += 1
        return response


def complete(
    model: ModelHandle | ScriptedModel,
    history: list[ChatMessage],
    retries: int = 3,
    backoff_s: float = 1.0,
) -> ChatMessage:
    """Send the full history, return the assistant reply.

    HTTP failures (transport, bad status, malformed body, timeout) are
    retried up to `retries` times with exponential backoff before raising.
    """
    if not history:
        raise ValueError("history must not be empty")
    if history[0].role != "system":
        raise ValueError("first message must have role 'system'")
    if isinstance(model, ScriptedModel):
        return ChatMessage("assistant", model.next_response())
    return _http_complete(model, history, retries, backoff_s)


def _http_complete(
    handle: ModelHandle, history: list[ChatMessage], retries: int, backoff_s: float
) -> ChatMessage:
    payload: dict = {
        "model": handle.model_id,
        "messages": [{"role": m.role, "content": m.content} for m in history],
        "temperature": handle.temperature,
        "max_tokens": handle.max_tokens,
    }
    if handle.seed is not None:
        payload["seed"] = handle.seed
    headers = {"Content-Type": "application/json"}
    if handle.auth_ref:
        credential = os.environ.get(handle.auth_ref)
        if credential is None:
            raise GatewayError(
                f"{handle.model_id}: credential env var {handle.auth_ref!r} is not set"
            )
        headers["Authorization"] = f"Bearer {credential}"

    last_error = ""
    attempts = retries + 1
    for attempt in range(1, attempts + 1):
        try:
            response = requests.post(
                handle.endpoint, json=payload, headers=headers, timeout=handle.timeout_s
            )
            if response.status_code // 100 != 2:
                raise GatewayError(
                    f"HTTP {response.status_code}: {response.text[:200]}"
                )
            body = response.json()
            content = body["choices"][0]["message"]["content"]
            if not isinstance(content, str):
                raise GatewayError("response content is not a string")
            return ChatMessage("assistant", content)
        except (requests.RequestException, GatewayError, KeyError, IndexError, ValueError) as exc:
            last_error = f"{type(exc).__name__}: {exc}"
            if attempt < attempts:
                time.sleep(backoff_s * 2 ** (attempt - 1))
    raise GatewayError(
        f"{handle.model_id}: request failed after {attempts} attempts: {last_error}"
    )


_limiters: dict[str, threading.BoundedSemaphore] = {}
_limiters_lock = threading.Lock()


def endpoint_limiter(endpoint: str, cap: int = 4) -> threading.BoundedSemaphore:
    """Shared per-endpoint semaphore; callers hold it around complete()."""
    with _limiters_lock:
        limiter = _limiters.get(endpoint)
        if limiter is None:
            limiter = threading.BoundedSemaphore(cap)
            _limiters[endpoint] = limiter
        return limiter
