"""ideagraph: knowledge-graph-driven research hypothesis engine.

Samples stochastic concept paths from an ontological knowledge graph,
orchestrates role-specialized language-model agents over them to draft,
expand and critique seven-part research proposals, rates novelty against
the scholarly literature, and assembles everything into exportable
documents. A session service streams live transcripts to a steering UI.
"""

__version__ = "0.1.0"

from .graph import KnowledgeGraph, dump_graph, ensure_embeddings, load_graph, nearest_node
from .pathing import PathConfig, PathSample, sample_path, serialize_path, shortest_path
from .proposal import ResearchDocument, ResearchProposal, assemble_document, parse_proposal

__all__ = [
    "KnowledgeGraph",
    "PathConfig",
    "PathSample",
    "ResearchDocument",
    "ResearchProposal",
    "assemble_document",
    "dump_graph",
    "ensure_embeddings",
    "load_graph",
    "nearest_node",
    "parse_proposal",
    "sample_path",
    "serialize_path",
    "shortest_path",
    "__version__",
]
