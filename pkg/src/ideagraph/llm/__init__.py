from .backends import (
    ChatBackend,
    EmbeddingBackend,
    HashEmbeddingBackend,
    HTTPChatBackend,
    HTTPEmbeddingBackend,
    LlmGateway,
    ReplayBackend,
    ScriptedBackend,
    ScriptedEmbeddingBackend,
    normalize,
)
from .trace import TraceLog
from .types import BackendConfig, ChatMessage, ChatRequest, ChatResponse, ToolCall, ToolSchema

__all__ = [
    "BackendConfig",
    "ChatBackend",
    "ChatMessage",
    "ChatRequest",
    "ChatResponse",
    "EmbeddingBackend",
    "HTTPChatBackend",
    "HTTPEmbeddingBackend",
    "HashEmbeddingBackend",
    "LlmGateway",
    "ReplayBackend",
    "ScriptedBackend",
    "ScriptedEmbeddingBackend",
    "ToolCall",
    "ToolSchema",
    "TraceLog",
    "normalize",
]
