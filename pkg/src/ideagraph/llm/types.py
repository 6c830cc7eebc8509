"""Wire-shape types for chat-completion and embedding backends."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class ToolSchema:
    """Descriptor advertised to the model: name, description, parameters.

    parameters maps parameter name -> {"type": ..., "description": ...}.
    """

    name: str
    description: str
    parameters: dict[str, dict[str, str]] = field(default_factory=dict)
    required: list[str] = field(default_factory=list)

    def to_wire(self) -> dict[str, Any]:
        return {
            "type": "function",
            "function": {
                "name": self.name,
                "description": self.description,
                "parameters": {
                    "type": "object",
                    "properties": self.parameters,
                    "required": self.required,
                },
            },
        }


@dataclass
class ToolCall:
    name: str
    arguments: dict[str, Any]
    call_id: str = ""


@dataclass
class ChatMessage:
    role: str  # system | user | assistant | tool
    content: str
    name: Optional[str] = None
    tool_calls: list[ToolCall] = field(default_factory=list)
    tool_call_id: Optional[str] = None

    def to_wire(self) -> dict[str, Any]:
        msg: dict[str, Any] = {"role": self.role, "content": self.content}
        if self.name:
            msg["name"] = self.name
        if self.tool_calls:
            msg["tool_calls"] = [
                {
                    "id": tc.call_id,
                    "type": "function",
                    "function": {"name": tc.name, "arguments": _json_dumps(tc.arguments)},
                }
                for tc in self.tool_calls
            ]
        if self.tool_call_id:
            msg["tool_call_id"] = self.tool_call_id
        return msg


@dataclass
class ChatRequest:
    messages: list[ChatMessage]
    model: str = ""
    temperature: float = 0.0
    max_output_tokens: int = 4096
    tool_schemas: list[ToolSchema] = field(default_factory=list)

    def __post_init__(self):
        if not self.messages:
            raise ValueError("ChatRequest.messages must be non-empty")


FINISH_REASONS = ("stop", "tool_call", "length", "error")


@dataclass
class ChatResponse:
    content: str = ""
    tool_calls: list[ToolCall] = field(default_factory=list)
    finish_reason: str = "stop"

    def __post_init__(self):
        if self.finish_reason not in FINISH_REASONS:
            raise ValueError(f"unknown finish_reason {self.finish_reason!r}")
        # tool_calls non-empty iff finish_reason == tool_call
        if bool(self.tool_calls) != (self.finish_reason == "tool_call"):
            raise ValueError("tool_calls must be non-empty exactly when finish_reason='tool_call'")


@dataclass
class BackendConfig:
    """Connection settings for an OpenAI-compatible HTTP backend."""

    endpoint: str = ""
    api_key_env: str = "OPENAI_API_KEY"
    model: str = ""
    timeout: float = 60.0
    max_attempts: int = 3
    backoff_base: float = 0.5

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


def _json_dumps(obj: Any) -> str:
    import json

    return json.dumps(obj, ensure_ascii=False, sort_keys=True)
