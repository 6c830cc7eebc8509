"""Heuristic path search with randomized priorities and waypoint splicing.

The core search is best-first over a priority queue keyed by
cost(v) = h(v, target) + alpha * u, where h is cosine distance between node
embeddings and u a uniform draw in [0, 1). No accumulated path cost enters
the priority. With alpha = 0 the search is fully deterministic.

Determinism contract: one seeded generator per sampling call; draws are
consumed in node-expansion order, then unique-neighbor order sorted by node
id, with one draw per neighbor whether or not the neighbor gets queued.
Queue entries are (cost, node, parent) tuples so equal costs resolve by node
id, then parent id, identically on every platform.
"""

from __future__ import annotations

import heapq
import random
from collections import deque

from ..errors import NoPathError
from ..graph.embeddings import EmbeddingStore
from ..graph.model import KnowledgeGraph
from .serialize import render_path_string
from .subgraph import extract_subgraph
from .types import PathConfig, PathSample


def best_first_path(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    source: str,
    target: str,
    alpha: float,
    rng: random.Random | None,
) -> list[str]:
    """Simple path source -> target found by the randomized best-first search."""
    g.require_node(source)
    g.require_node(target)
    if source == target:
        return [source]

    tvec = store.vectors[target]
    queue: list[tuple[float, str, str]] = [(0.0, source, "")]
    visited: set[str] = set()
    pred: dict[str, str] = {}

    while queue:
        _, node, parent = heapq.heappop(queue)
        if node in visited:
            continue
        visited.add(node)
        if parent:
            pred[node] = parent
        if node == target:
            return _reconstruct(pred, source, target)
        for neighbor in g.neighbors(node):
            h = 1.0 - float(store.vectors[neighbor] @ tvec)
            cost = h + (alpha * rng.random() if alpha > 0.0 and rng is not None else 0.0)
            if neighbor not in visited:
                heapq.heappush(queue, (cost, neighbor, node))
    raise NoPathError(source, target)


def _reconstruct(pred: dict[str, str], source: str, target: str) -> list[str]:
    path = [target]
    while path[-1] != source:
        path.append(pred[path[-1]])
    path.reverse()
    return path


def bfs_distances(g: KnowledgeGraph, start: str) -> dict[str, int]:
    """Unweighted undirected hop distance from start to every reachable node."""
    dist = {start: 0}
    frontier = deque([start])
    while frontier:
        current = frontier.popleft()
        for neighbor in g.neighbors(current):
            if neighbor not in dist:
                dist[neighbor] = dist[current] + 1
                frontier.append(neighbor)
    return dist


def minimum_hop_path(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    source: str,
    target: str,
) -> list[str]:
    """A minimum-hop path; ties prefer smaller cosine distance to target, then id."""
    g.require_node(source)
    g.require_node(target)
    if source == target:
        return [source]
    dist = bfs_distances(g, target)
    if source not in dist:
        raise NoPathError(source, target)
    path = [source]
    current = source
    while current != target:
        candidates = [n for n in g.neighbors(current) if dist.get(n, -1) == dist[current] - 1]
        current = min(candidates, key=lambda n: (store.cosine_distance(n, target), n))
        path.append(current)
    return path


def _relations_along(g: KnowledgeGraph, walk: list[str]) -> list[str]:
    return [g.relation_between(walk[i], walk[i + 1]) for i in range(len(walk) - 1)]


def _finish_sample(
    g: KnowledgeGraph,
    walk: list[str],
    cfg: PathConfig,
    meta: dict,
) -> PathSample:
    labels = [g.label(n) for n in walk]
    relations = _relations_along(g, walk)
    sub = extract_subgraph(g, walk, cfg.hops)
    return PathSample(
        nodes=walk,
        labels=labels,
        relations=relations,
        subgraph=sub,
        path_string=render_path_string(labels, relations),
        meta=meta,
    )


def sample_path(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    source: str,
    target: str,
    cfg: PathConfig,
) -> PathSample:
    """Randomized heuristic walk source -> target with optional waypoints.

    Phase 1 runs the randomized best-first search. Phase 2, when
    cfg.k_waypoints > 0, picks that many distinct off-path neighbors of path
    nodes (seeded, uniform) and splices in deterministic legs end -> w1 ->
    ... -> wk -> target, so the result is a walk that may revisit nodes.
    Fewer candidates than requested is not an error; the shortfall lands in
    meta. Phase 3 extracts the hops-bounded context subgraph and serializes.

    source == target short-circuits to the single-node sample.
    """
    g.require_node(source)
    g.require_node(target)
    meta = {
        "source": source,
        "target": target,
        "alpha": cfg.alpha,
        "k_waypoints": cfg.k_waypoints,
        "hops": cfg.hops,
        "seed": cfg.seed,
        "mode": "random",
        "waypoint_leg_mode": cfg.waypoint_leg_mode,
        "waypoints": [],
        "waypoint_shortfall": 0,
    }
    if source == target:
        return _finish_sample(g, [source], cfg, meta)

    rng = random.Random(cfg.seed)
    walk = best_first_path(g, store, source, target, cfg.alpha, rng)

    if cfg.k_waypoints > 0:
        on_path = set(walk)
        candidates = sorted({n for p in walk for n in g.neighbors(p)} - on_path)
        count = min(cfg.k_waypoints, len(candidates))
        waypoints = rng.sample(candidates, count) if count else []
        meta["waypoints"] = list(waypoints)
        meta["waypoint_shortfall"] = cfg.k_waypoints - count
        leg_route = (
            (lambda a, b: minimum_hop_path(g, store, a, b))
            if cfg.waypoint_leg_mode == "bfs"
            else (lambda a, b: best_first_path(g, store, a, b, 0.0, None))
        )
        for waypoint in waypoints:
            leg = leg_route(walk[-1], waypoint)
            walk = walk + leg[1:]
        if walk[-1] != target:
            final = leg_route(walk[-1], target)
            walk = walk + final[1:]

    return _finish_sample(g, walk, cfg, meta)


def shortest_path(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    source: str,
    target: str,
    hops: int = 2,
) -> PathSample:
    """Minimum-hop sample with the same subgraph/serialization as sample_path."""
    cfg = PathConfig(alpha=0.0, k_waypoints=0, hops=hops, mode="shortest")
    walk = minimum_hop_path(g, store, source, target)
    meta = {
        "source": source,
        "target": target,
        "alpha": 0.0,
        "k_waypoints": 0,
        "hops": hops,
        "seed": 0,
        "mode": "shortest",
        "waypoints": [],
        "waypoint_shortfall": 0,
    }
    return _finish_sample(g, walk, cfg, meta)


def sample(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    source: str,
    target: str,
    cfg: PathConfig,
) -> PathSample:
    """Dispatch on cfg.mode."""
    if cfg.mode == "shortest":
        return shortest_path(g, store, source, target, hops=cfg.hops)
    return sample_path(g, store, source, target, cfg)
