"""Configuration and result types for path sampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..errors import ConfigError
from ..graph.model import KnowledgeGraph

MODES = ("random", "shortest")
LEG_MODES = ("heuristic", "bfs")


@dataclass
class PathConfig:
    """Knobs for one sampling run.

    alpha weights the uniform random term added to each queue priority
    (0 disables randomness entirely); k_waypoints off-path detours are
    spliced in after the initial search; hops bounds the context subgraph.
    waypoint_leg_mode picks how detour legs are routed: "heuristic" reuses
    the alpha=0 best-first search, "bfs" uses true minimum-hop legs.
    """

    alpha: float = 0.2
    k_waypoints: int = 0
    hops: int = 2
    seed: int = 0
    mode: str = "random"
    waypoint_leg_mode: str = "heuristic"

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 10.0:
            raise ConfigError("alpha", f"must be in [0, 10], got {self.alpha}")
        if self.k_waypoints < 0:
            raise ConfigError("k_waypoints", f"must be >= 0, got {self.k_waypoints}")
        if self.hops not in (0, 1, 2):
            raise ConfigError("hops", f"must be 0, 1 or 2, got {self.hops}")
        if self.mode not in MODES:
            raise ConfigError("mode", f"must be one of {MODES}, got {self.mode!r}")
        if self.waypoint_leg_mode not in LEG_MODES:
            raise ConfigError(
                "waypoint_leg_mode", f"must be one of {LEG_MODES}, got {self.waypoint_leg_mode!r}"
            )


@dataclass
class PathSample:
    """A sampled walk plus its serialized form and context subgraph."""

    nodes: list[str]
    labels: list[str]
    relations: list[str]
    subgraph: KnowledgeGraph
    path_string: str
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def target(self) -> str:
        return self.nodes[-1]

    def check_invariants(self, g: KnowledgeGraph):
        """Assert the structural contract against the graph it was drawn from."""
        assert len(self.nodes) >= 1
        assert len(self.relations) == len(self.nodes) - 1
        assert len(self.labels) == len(self.nodes)
        for i, rel in enumerate(self.relations):
            a, b = self.nodes[i], self.nodes[i + 1]
            stored = {e.relation for e in g.edges_between(a, b)}
            assert stored, f"consecutive nodes {a!r}, {b!r} share no edge"
            assert rel in stored, f"relation {rel!r} is not stored between {a!r} and {b!r}"
        for nid in self.nodes:
            assert nid in self.subgraph.nodes, f"path node {nid!r} missing from subgraph"
