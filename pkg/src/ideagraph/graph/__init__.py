from .embeddings import EmbeddingStore, ensure_embeddings, nearest_node, read_cache
from .graphml import dump_graph, load_graph
from .model import EdgeRecord, KnowledgeGraph, NodeRecord
from .sampling import random_node_pair

__all__ = [
    "EdgeRecord",
    "EmbeddingStore",
    "KnowledgeGraph",
    "NodeRecord",
    "dump_graph",
    "ensure_embeddings",
    "load_graph",
    "nearest_node",
    "random_node_pair",
    "read_cache",
]
