"""Chat and embedding backends behind a single gateway facade.

Three chat backends cover every run mode:
  ScriptedBackend — replays a canned queue and records incoming requests
  (the deterministic stand-in used by all offline tests),
  ReplayBackend   — feeds responses recorded in a prior TraceLog,
  HTTPChatBackend — OpenAI-compatible chat-completions endpoint with retry.

Embedding backends mirror the split: a seeded hash embedder for offline use
and an OpenAI-compatible HTTP embedder for real runs. All embedding output
is unit-normalized before it leaves the gateway.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from typing import Optional, Sequence

import numpy as np
import requests

from ..errors import ArgumentError, BackendUnavailableError, ProtocolError, ScriptedExhaustedError
from .trace import TraceLog
from .types import BackendConfig, ChatRequest, ChatResponse, ToolCall

logger = logging.getLogger(__name__)

RETRYABLE_STATUS = {429, 500, 502, 503, 504}


class ChatBackend:
    def complete(self, req: ChatRequest) -> ChatResponse:
        raise NotImplementedError


class EmbeddingBackend:
    model_tag: str = ""
    dimension: int = 0

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        raise NotImplementedError


class ScriptedBackend(ChatBackend):
    """Returns queued responses in order; records every request it sees."""

    def __init__(self, responses: Sequence[ChatResponse | str] = ()):
        self.queue: list[ChatResponse] = [self._coerce(r) for r in responses]
        self.requests: list[ChatRequest] = []

    @staticmethod
    def _coerce(item: ChatResponse | str) -> ChatResponse:
        if isinstance(item, ChatResponse):
            return item
        return ChatResponse(content=str(item))

    def push(self, *items: ChatResponse | str):
        self.queue.extend(self._coerce(i) for i in items)

    def complete(self, req: ChatRequest) -> ChatResponse:
        self.requests.append(req)
        if not self.queue:
            raise ScriptedExhaustedError(
                f"scripted backend exhausted after {len(self.requests) - 1} responses"
            )
        return self.queue.pop(0)


class ReplayBackend(ChatBackend):
    """Replays the response sequence of a recorded trace."""

    def __init__(self, trace: TraceLog):
        self.queue = trace.responses()
        self.requests: list[ChatRequest] = []

    def complete(self, req: ChatRequest) -> ChatResponse:
        self.requests.append(req)
        if not self.queue:
            raise ScriptedExhaustedError("replay trace exhausted")
        return self.queue.pop(0)


class HTTPChatBackend(ChatBackend):
    """OpenAI-compatible chat completions with exponential-backoff retry."""

    def __init__(self, config: BackendConfig, session: Optional[requests.Session] = None):
        self.config = config
        self.session = session or requests.Session()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, req: ChatRequest) -> ChatResponse:
        body = {
            "model": req.model or self.config.model,
            "messages": [m.to_wire() for m in req.messages],
            "temperature": req.temperature,
            "max_tokens": req.max_output_tokens,
        }
        if req.tool_schemas:
            body["tools"] = [t.to_wire() for t in req.tool_schemas]
        raw = _request_with_retry(
            self.session, self.config, self.config.endpoint, body, self._headers()
        )
        return _parse_chat_body(raw)


class HTTPEmbeddingBackend(EmbeddingBackend):
    """OpenAI-compatible embeddings endpoint."""

    def __init__(self, config: BackendConfig, session: Optional[requests.Session] = None):
        self.config = config
        self.model_tag = config.model
        self.session = session or requests.Session()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.config.api_key_env, "")
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        _check_texts(texts)
        body = {"model": self.config.model, "input": list(texts)}
        raw = _request_with_retry(
            self.session, self.config, self.config.endpoint, body, self._headers()
        )
        try:
            rows = sorted(raw["data"], key=lambda r: r["index"])
            vectors = [np.asarray(r["embedding"], dtype=np.float64) for r in rows]
        except (KeyError, TypeError) as exc:
            raise ProtocolError(f"unexpected embeddings body: {exc}", json.dumps(raw)[:2000])
        if len(vectors) != len(texts):
            raise ProtocolError(f"expected {len(texts)} vectors, got {len(vectors)}")
        if vectors:
            self.dimension = vectors[0].size
        return [normalize(v) for v in vectors]


class HashEmbeddingBackend(EmbeddingBackend):
    """Deterministic offline embedder: sha256-seeded gaussian unit vectors.

    Not semantically meaningful, but stable across runs and platforms, which
    is what the offline pipeline and the determinism tests need.
    """

    def __init__(self, dimension: int = 64):
        self.dimension = dimension
        self.model_tag = f"hash-sha256-d{dimension}"

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        _check_texts(texts)
        return [self._one(t) for t in texts]

    def _one(self, text: str) -> np.ndarray:
        digest = hashlib.sha256(text.strip().encode("utf-8")).digest()
        seed = int.from_bytes(digest[:8], "big") % (2**32)
        rng = np.random.RandomState(seed)
        return normalize(rng.standard_normal(self.dimension))


class ScriptedEmbeddingBackend(EmbeddingBackend):
    """Maps exact texts to preset vectors; counts calls for cache tests."""

    def __init__(self, vectors: dict[str, Sequence[float]], model_tag: str = "scripted"):
        self.vectors = {k: np.asarray(v, dtype=np.float64) for k, v in vectors.items()}
        self.model_tag = model_tag
        self.dimension = next(iter(self.vectors.values())).size if self.vectors else 0
        self.calls = 0

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        _check_texts(texts)
        self.calls += len(texts)
        out = []
        for t in texts:
            if t not in self.vectors:
                raise ArgumentError(f"scripted embedding backend has no vector for {t!r}")
            out.append(normalize(self.vectors[t]))
        return out


class LlmGateway:
    """Uniform access point: chat completion + embeddings + session trace."""

    def __init__(
        self,
        chat: Optional[ChatBackend] = None,
        embeddings: Optional[EmbeddingBackend] = None,
        trace: Optional[TraceLog] = None,
    ):
        self.chat = chat
        self.embeddings = embeddings
        self.trace = trace

    def complete(self, req: ChatRequest) -> ChatResponse:
        if self.chat is None:
            raise BackendUnavailableError("no chat backend configured")
        if self.trace:
            self.trace.record_request(req)
        resp = self.chat.complete(req)
        if self.trace:
            self.trace.record_response(resp)
        return resp

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        if self.embeddings is None:
            raise BackendUnavailableError("no embedding backend configured")
        _check_texts(texts)
        return [normalize(v) for v in self.embeddings.embed(texts)]

    @property
    def embedding_tag(self) -> str:
        return self.embeddings.model_tag if self.embeddings else ""


def normalize(vector: np.ndarray) -> np.ndarray:
    v = np.asarray(vector, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ArgumentError("cannot normalize a zero vector")
    return v / norm


def _check_texts(texts: Sequence[str]):
    if not texts:
        raise ArgumentError("texts must be non-empty")
    for i, t in enumerate(texts):
        if not isinstance(t, str) or not t.strip():
            raise ArgumentError(f"text at index {i} is empty")


def _request_with_retry(
    session: requests.Session,
    config: BackendConfig,
    url: str,
    body: dict,
    headers: dict[str, str],
) -> dict:
    last_error: Exception | None = None
    for attempt in range(config.max_attempts):
        if attempt:
            time.sleep(config.backoff_base * (2 ** (attempt - 1)))
        try:
            resp = session.post(url, json=body, headers=headers, timeout=config.timeout)
        except requests.RequestException as exc:
            last_error = exc
            logger.warning("backend request failed (attempt %d): %s", attempt + 1, exc)
            continue
        if resp.status_code in RETRYABLE_STATUS:
            last_error = BackendUnavailableError(f"status {resp.status_code}")
            logger.warning("backend returned %d (attempt %d)", resp.status_code, attempt + 1)
            continue
        if resp.status_code != 200:
            raise ProtocolError(f"backend returned status {resp.status_code}", resp.text[:2000])
        try:
            return resp.json()
        except ValueError as exc:
            raise ProtocolError(f"backend returned non-JSON body: {exc}", resp.text[:2000])
    raise BackendUnavailableError(
        f"backend unavailable after {config.max_attempts} attempts: {last_error}"
    )


def _parse_chat_body(raw: dict) -> ChatResponse:
    try:
        choice = raw["choices"][0]
        message = choice["message"]
    except (KeyError, IndexError, TypeError) as exc:
        raise ProtocolError(f"unexpected chat body: {exc}", json.dumps(raw)[:2000])
    tool_calls = []
    for tc in message.get("tool_calls") or []:
        fn = tc.get("function", {})
        try:
            args = json.loads(fn.get("arguments") or "{}")
        except ValueError:
            args = {"_raw": fn.get("arguments", "")}
        tool_calls.append(ToolCall(name=fn.get("name", ""), arguments=args, call_id=tc.get("id", "")))
    finish = choice.get("finish_reason", "stop")
    if tool_calls:
        finish = "tool_call"
    elif finish in ("tool_calls", "function_call"):
        finish = "stop"
    elif finish not in ("stop", "length", "error"):
        finish = "stop"
    return ChatResponse(content=message.get("content") or "", tool_calls=tool_calls, finish_reason=finish)
