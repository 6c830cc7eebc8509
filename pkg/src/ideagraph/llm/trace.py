"""Append-only trace of every chat request/response in a session.

The trace doubles as a replay source: a ReplayBackend feeds recorded
responses back in order so golden tests never touch a live model.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import asdict
from pathlib import Path
from typing import Any, Optional

from .types import ChatRequest, ChatResponse, ToolCall


class TraceLog:
    """JSONL trace; one line per request or response event."""

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path else None
        self.events: list[dict[str, Any]] = []
        self._lock = threading.Lock()

    def record_request(self, req: ChatRequest):
        self._append({"kind": "request", "payload": _request_to_dict(req)})

    def record_response(self, resp: ChatResponse):
        self._append({"kind": "response", "payload": asdict(resp)})

    def _append(self, event: dict[str, Any]):
        event["ts"] = time.time()
        with self._lock:
            self.events.append(event)
            if self.path:
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(event, ensure_ascii=False) + "\n")

    def responses(self) -> list[ChatResponse]:
        return [_response_from_dict(e["payload"]) for e in self.events if e["kind"] == "response"]

    @classmethod
    def load(cls, path: Path) -> "TraceLog":
        trace = cls()
        with Path(path).open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    trace.events.append(json.loads(line))
        return trace


def _request_to_dict(req: ChatRequest) -> dict[str, Any]:
    return {
        "model": req.model,
        "temperature": req.temperature,
        "max_output_tokens": req.max_output_tokens,
        "messages": [m.to_wire() for m in req.messages],
        "tools": [t.to_wire() for t in req.tool_schemas],
    }


def _response_from_dict(payload: dict[str, Any]) -> ChatResponse:
    return ChatResponse(
        content=payload.get("content", ""),
        tool_calls=[ToolCall(**tc) for tc in payload.get("tool_calls", [])],
        finish_reason=payload.get("finish_reason", "stop"),
    )
