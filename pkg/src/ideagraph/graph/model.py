"""In-memory model of the ontological knowledge graph.

Nodes carry a human-readable concept label; edges carry a free-text relation
label and keep the direction found in the input file. Traversal helpers treat
the graph as undirected, which is how every consumer in this package walks it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyInputError, GraphIntegrityError, LookupError_


@dataclass(frozen=True)
class NodeRecord:
    id: str
    label: str

    def __post_init__(self):
        if not self.label.strip():
            raise GraphIntegrityError(f"node {self.id!r} has an empty label")


@dataclass(frozen=True)
class EdgeRecord:
    source: str
    target: str
    relation: str

    def __post_init__(self):
        if not self.relation.strip():
            raise GraphIntegrityError(
                f"edge {self.source!r} -> {self.target!r} has an empty relation"
            )

    def other(self, node_id: str) -> str:
        """Endpoint opposite to node_id (node_id itself for self-loops)."""
        return self.target if node_id == self.source else self.source


@dataclass
class KnowledgeGraph:
    """Immutable concept graph with undirected adjacency.

    Multi-edges and self-loops are preserved. Adjacency lists contain each
    incident edge exactly once per endpoint (self-loops appear once).
    """

    nodes: dict[str, NodeRecord] = field(default_factory=dict)
    edges: list[EdgeRecord] = field(default_factory=list)
    adjacency: dict[str, list[EdgeRecord]] = field(default_factory=dict)

    @classmethod
    def build(cls, nodes: list[NodeRecord], edges: list[EdgeRecord]) -> "KnowledgeGraph":
        node_map: dict[str, NodeRecord] = {}
        for n in nodes:
            if n.id in node_map:
                raise GraphIntegrityError(f"duplicate node id {n.id!r}")
            node_map[n.id] = n
        adjacency: dict[str, list[EdgeRecord]] = {nid: [] for nid in node_map}
        for e in edges:
            for endpoint in (e.source, e.target):
                if endpoint not in node_map:
                    raise GraphIntegrityError(
                        f"edge {e.source!r} -> {e.target!r} ({e.relation!r}) "
                        f"references missing node {endpoint!r}"
                    )
            adjacency[e.source].append(e)
            if e.target != e.source:
                adjacency[e.target].append(e)
        return cls(nodes=node_map, edges=list(edges), adjacency=adjacency)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def require_node(self, node_id: str) -> NodeRecord:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise LookupError_(f"unknown node id {node_id!r}") from None

    def label(self, node_id: str) -> str:
        return self.require_node(node_id).label

    def neighbors(self, node_id: str) -> list[str]:
        """Unique undirected neighbor ids, sorted for deterministic iteration."""
        self.require_node(node_id)
        return sorted({e.other(node_id) for e in self.adjacency[node_id]})

    def edges_between(self, a: str, b: str) -> list[EdgeRecord]:
        """All edges joining a and b in either stored direction, file order."""
        return [
            e
            for e in self.adjacency.get(a, [])
            if (e.source == a and e.target == b) or (e.source == b and e.target == a)
        ]

    def relation_between(self, a: str, b: str) -> str:
        """Relation label of the first stored edge between a and b."""
        found = self.edges_between(a, b)
        if not found:
            raise LookupError_(f"no edge between {a!r} and {b!r}")
        return found[0].relation

    def has_edge(self, a: str, b: str) -> bool:
        return bool(self.edges_between(a, b))

    def induced_subgraph(self, node_ids: set[str]) -> "KnowledgeGraph":
        """Node-induced subgraph: given nodes plus every edge with both ends inside."""
        missing = node_ids - self.nodes.keys()
        if missing:
            raise LookupError_(f"unknown node ids: {sorted(missing)}")
        nodes = [self.nodes[nid] for nid in sorted(node_ids)]
        edges = [e for e in self.edges if e.source in node_ids and e.target in node_ids]
        return KnowledgeGraph.build(nodes, edges)

    def ensure_nonempty(self):
        if not self.nodes:
            raise EmptyInputError("graph has no nodes")
