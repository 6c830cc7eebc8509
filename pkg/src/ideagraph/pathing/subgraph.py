"""Context-subgraph extraction around a path."""

from __future__ import annotations

from collections import deque

from ..graph.model import KnowledgeGraph


def extract_subgraph(g: KnowledgeGraph, path_nodes: list[str], hops: int) -> KnowledgeGraph:
    """Node-induced neighborhood of the path.

    Node set: everything within `hops` undirected hops of any path node
    (multi-source BFS). Edge set: every graph edge with both endpoints
    inside that node set.
    """
    seeds = list(dict.fromkeys(path_nodes))
    for nid in seeds:
        g.require_node(nid)
    depth = {nid: 0 for nid in seeds}
    frontier = deque(seeds)
    while frontier:
        current = frontier.popleft()
        if depth[current] >= hops:
            continue
        for neighbor in g.neighbors(current):
            if neighbor not in depth:
                depth[neighbor] = depth[current] + 1
                frontier.append(neighbor)
    return g.induced_subgraph(set(depth))
