"""Tool registry exposed to the assistant agent.

Two tools: one generates a knowledge path from two keywords, the other
rates the novelty and feasibility of a hypothesis against the literature.
Tool failures come back as error text (never exceptions) so the chat can
continue and the model can retry.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from ..errors import IdeagraphError
from ..graph.embeddings import EmbeddingStore, nearest_node
from ..graph.model import KnowledgeGraph
from ..llm.backends import LlmGateway
from ..llm.types import ToolSchema
from ..novelty.assess import assess_novelty
from ..novelty.scholar import SearchBackend
from ..pathing.search import sample_path
from ..pathing.types import PathConfig, PathSample
from ..proposal.schema import ResearchProposal

logger = logging.getLogger(__name__)

GENERATE_PATH = "generate_path"
RATE_NOVELTY = "rate_novelty_feasibility"


@dataclass
class ToolDescriptor:
    name: str
    description: str
    parameters: dict[str, dict[str, str]]
    required: list[str]
    handler: Callable[..., str]

    def schema(self) -> ToolSchema:
        return ToolSchema(
            name=self.name,
            description=self.description,
            parameters=self.parameters,
            required=self.required,
        )


class ToolRegistry:
    def __init__(self):
        self._tools: dict[str, ToolDescriptor] = {}

    def register(self, descriptor: ToolDescriptor):
        if descriptor.name in self._tools:
            raise IdeagraphError(f"tool {descriptor.name!r} already registered")
        self._tools[descriptor.name] = descriptor

    def schemas(self) -> list[ToolSchema]:
        return [d.schema() for d in self._tools.values()]

    def invoke(self, name: str, args: dict[str, Any]) -> str:
        """Run a tool; every failure is rendered as an error string."""
        descriptor = self._tools.get(name)
        if descriptor is None:
            return f"Error: unknown tool {name!r}. Available: {sorted(self._tools)}"
        for param in descriptor.required:
            value = args.get(param)
            if value is None or (isinstance(value, str) and not value.strip()):
                return f"Error: parameter {param!r} of tool {name!r} must be a non-empty value."
        try:
            return descriptor.handler(**{k: args[k] for k in descriptor.parameters if k in args})
        except Exception as exc:
            logger.warning("tool %s failed: %s", name, exc)
            return f"Error: tool {name!r} failed: {exc}"


@dataclass
class ToolContext:
    """Everything the default tools need, captured once per session."""

    graph: KnowledgeGraph
    store: EmbeddingStore
    gateway: LlmGateway
    path_config: PathConfig = field(default_factory=PathConfig)
    search: Optional[SearchBackend] = None
    novelty_gateway: Optional[LlmGateway] = None
    last_sample: Optional[PathSample] = None
    last_report: Optional[Any] = None


def build_default_registry(ctx: ToolContext) -> ToolRegistry:
    registry = ToolRegistry()

    def generate_path(keyword_1: str, keyword_2: str) -> str:
        source, _ = nearest_node(ctx.graph, ctx.store, keyword_1, ctx.gateway)
        target, _ = nearest_node(ctx.graph, ctx.store, keyword_2, ctx.gateway)
        sample = sample_path(ctx.graph, ctx.store, source, target, ctx.path_config)
        ctx.last_sample = sample
        return sample.path_string

    def rate_novelty_feasibility(hypothesis: str) -> str:
        if ctx.search is None:
            return "Error: no literature search backend is configured."
        proposal = _hypothesis_only_proposal(hypothesis)
        report = assess_novelty(
            proposal, ctx.novelty_gateway or ctx.gateway, ctx.search
        )
        ctx.last_report = report
        return report.summary_text()

    registry.register(
        ToolDescriptor(
            name=GENERATE_PATH,
            description=(
                "Generate a knowledge path between two keywords by matching them to "
                "graph concepts and sampling a path through the knowledge graph."
            ),
            parameters={
                "keyword_1": {"type": "string", "description": "first concept keyword"},
                "keyword_2": {"type": "string", "description": "second concept keyword"},
            },
            required=["keyword_1", "keyword_2"],
            handler=generate_path,
        )
    )
    registry.register(
        ToolDescriptor(
            name=RATE_NOVELTY,
            description=(
                "Assess the novelty and feasibility of a research hypothesis against "
                "the published literature, returning 1-10 ratings with a rationale."
            ),
            parameters={
                "hypothesis": {"type": "string", "description": "the research hypothesis text"},
            },
            required=["hypothesis"],
            handler=rate_novelty_feasibility,
        )
    )
    return registry


def _hypothesis_only_proposal(hypothesis: str) -> ResearchProposal:
    # the rating tool receives bare hypothesis text; pad the remaining keys
    return ResearchProposal(
        fields={key: hypothesis if key == "hypothesis" else "(not provided)" for key in (
            "hypothesis", "outcome", "mechanisms", "design_principles",
            "unexpected_properties", "comparison", "novelty",
        )}
    )
