"""TOML configuration: one file describes graph, backends, and service.

Example (all keys optional; values shown are the defaults):

    [graph]
    path = "graph.graphml"
    label_attr = "label"
    relation_attr = "label"
    embedding_cache = ""        # default: <graph path>.embeddings.jsonl

    [embeddings]
    backend = "hash"            # "hash" (offline, deterministic) or "http"
    dimension = 64              # hash backend only
    endpoint = ""               # OpenAI-compatible embeddings URL
    model = ""
    api_key_env = "OPENAI_API_KEY"

    [chat]
    backend = "http"            # "http" or "scripted"
    endpoint = "https://api.openai.com/v1/chat/completions"
    model = "gpt-4o"
    api_key_env = "OPENAI_API_KEY"
    temperature = 0.7
    timeout = 60.0
    max_attempts = 3
    script_path = ""            # scripted backend: JSON list of responses

    [search]
    base_url = "https://api.semanticscholar.org/graph/v1"
    min_interval = 1.1

    [path]
    alpha = 0.2
    k_waypoints = 0
    hops = 2
    seed = 0

    [service]
    host = "127.0.0.1"
    port = 8230
    data_dir = "./ideagraph-data"
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigError
from .graph.embeddings import EmbeddingStore, ensure_embeddings
from .graph.graphml import load_graph
from .graph.model import KnowledgeGraph
from .llm.backends import (
    HashEmbeddingBackend,
    HTTPChatBackend,
    HTTPEmbeddingBackend,
    LlmGateway,
    ScriptedBackend,
)
from .llm.types import BackendConfig, ChatResponse, ToolCall
from .novelty.scholar import RateLimiter, SemanticScholarClient
from .pathing.types import PathConfig


@dataclass
class AppConfig:
    raw: dict[str, Any] = field(default_factory=dict)

    def section(self, name: str) -> dict[str, Any]:
        return dict(self.raw.get(name, {}))

    def get(self, section: str, key: str, default: Any) -> Any:
        return self.raw.get(section, {}).get(key, default)


def load_config(path: Optional[Path]) -> AppConfig:
    if path is None:
        return AppConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError("config", f"no such file: {path}")
    with path.open("rb") as fh:
        return AppConfig(raw=tomllib.load(fh))


def load_graph_from_config(config: AppConfig, override_path: Optional[Path] = None) -> KnowledgeGraph:
    raw_path = str(override_path) if override_path else str(config.get("graph", "path", ""))
    if not raw_path:
        raise ConfigError("graph.path", "no graph file configured; pass --graph or set [graph].path")
    graph_path = Path(raw_path)
    if not graph_path.is_file():
        raise ConfigError("graph.path", f"no such file: {graph_path}")
    with graph_path.open("rb") as fh:
        return load_graph(
            fh,
            label_attr=config.get("graph", "label_attr", "label"),
            relation_attr=config.get("graph", "relation_attr", "label"),
        )


def build_embedding_gateway(config: AppConfig) -> LlmGateway:
    kind = config.get("embeddings", "backend", "hash")
    if kind == "hash":
        backend = HashEmbeddingBackend(dimension=int(config.get("embeddings", "dimension", 64)))
    elif kind == "http":
        backend = HTTPEmbeddingBackend(
            BackendConfig(
                endpoint=config.get("embeddings", "endpoint", ""),
                model=config.get("embeddings", "model", ""),
                api_key_env=config.get("embeddings", "api_key_env", "OPENAI_API_KEY"),
            )
        )
    else:
        raise ConfigError("embeddings.backend", f"unknown backend {kind!r}")
    return LlmGateway(embeddings=backend)


def build_chat_gateway(config: AppConfig) -> LlmGateway:
    kind = config.get("chat", "backend", "http")
    embeddings = build_embedding_gateway(config).embeddings
    if kind == "scripted":
        script_path = config.get("chat", "script_path", "")
        responses = _load_script(Path(script_path)) if script_path else []
        return LlmGateway(chat=ScriptedBackend(responses), embeddings=embeddings)
    if kind == "http":
        backend = HTTPChatBackend(
            BackendConfig(
                endpoint=config.get("chat", "endpoint", "https://api.openai.com/v1/chat/completions"),
                model=config.get("chat", "model", "gpt-4o"),
                api_key_env=config.get("chat", "api_key_env", "OPENAI_API_KEY"),
                timeout=float(config.get("chat", "timeout", 60.0)),
                max_attempts=int(config.get("chat", "max_attempts", 3)),
            )
        )
        return LlmGateway(chat=backend, embeddings=embeddings)
    raise ConfigError("chat.backend", f"unknown backend {kind!r}")


def build_search_client(config: AppConfig) -> SemanticScholarClient:
    return SemanticScholarClient(
        base_url=config.get("search", "base_url", "https://api.semanticscholar.org/graph/v1"),
        rate_limiter=RateLimiter(float(config.get("search", "min_interval", 1.1))),
    )


def path_config_from(config: AppConfig, **overrides) -> PathConfig:
    values = {
        "alpha": float(config.get("path", "alpha", 0.2)),
        "k_waypoints": int(config.get("path", "k_waypoints", 0)),
        "hops": int(config.get("path", "hops", 2)),
        "seed": int(config.get("path", "seed", 0)),
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return PathConfig(**values)


def embedding_cache_path(config: AppConfig, graph_path: Path) -> Path:
    configured = config.get("graph", "embedding_cache", "")
    if configured:
        return Path(configured)
    return Path(str(graph_path) + ".embeddings.jsonl")


def prepare_store(
    config: AppConfig, g: KnowledgeGraph, graph_path: Path, gateway: LlmGateway
) -> EmbeddingStore:
    return ensure_embeddings(g, gateway, embedding_cache_path(config, graph_path))


def _load_script(path: Path) -> list:
    """Scripted chat backend input: JSON list of strings or tool-call objects."""
    items = json.loads(Path(path).read_text(encoding="utf-8"))
    responses = []
    for item in items:
        if isinstance(item, str):
            responses.append(item)
        else:
            calls = [
                ToolCall(name=c["name"], arguments=c.get("arguments", {}), call_id=c.get("id", ""))
                for c in item.get("tool_calls", [])
            ]
            responses.append(
                ChatResponse(
                    content=item.get("content", ""),
                    tool_calls=calls,
                    finish_reason="tool_call" if calls else "stop",
                )
            )
    return responses
