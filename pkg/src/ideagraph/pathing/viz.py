"""Subgraph exports: GraphML, self-contained HTML, and PNG figures.

Layout is a small seeded Fruchterman-Reingold run so the same subgraph
always lands in the same arrangement. The HTML export embeds an inline SVG
node-link drawing (no external assets, no scripts); the figure export draws
the same layout with matplotlib. Path nodes and path edges are highlighted
in both.
"""

from __future__ import annotations

import hashlib
import html
from pathlib import Path

import numpy as np

from ..graph.graphml import dump_graph
from ..graph.model import KnowledgeGraph
from .types import PathSample


def layout_positions(g: KnowledgeGraph, iterations: int = 60) -> dict[str, tuple[float, float]]:
    """Deterministic force-directed layout in the unit square."""
    ids = sorted(g.nodes)
    n = len(ids)
    if n == 0:
        return {}
    if n == 1:
        return {ids[0]: (0.5, 0.5)}
    index = {nid: i for i, nid in enumerate(ids)}
    seed = int.from_bytes(hashlib.sha256("|".join(ids).encode("utf-8")).digest()[:4], "big")
    rng = np.random.RandomState(seed)
    pos = rng.uniform(0.0, 1.0, size=(n, 2))

    pairs = {(index[e.source], index[e.target]) for e in g.edges if e.source != e.target}
    k = 1.0 / np.sqrt(n)
    temperature = 0.1
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-4)
        # repulsion between all pairs
        disp = (delta / dist[..., None]) * (k * k / dist)[..., None]
        force = disp.sum(axis=1)
        # attraction along edges
        for i, j in pairs:
            d = pos[i] - pos[j]
            length = max(float(np.linalg.norm(d)), 1e-4)
            pull = d / length * (length * length / k)
            force[i] -= pull
            force[j] += pull
        lengths = np.maximum(np.linalg.norm(force, axis=1), 1e-9)
        pos += force / lengths[:, None] * np.minimum(lengths, temperature)[:, None]
        temperature *= 0.95

    span = pos.max(axis=0) - pos.min(axis=0)
    span[span == 0] = 1.0
    pos = (pos - pos.min(axis=0)) / span
    return {nid: (float(x), float(y)) for nid, (x, y) in zip(ids, pos)}


def _path_edge_pairs(sample: PathSample) -> set[frozenset]:
    return {
        frozenset((sample.nodes[i], sample.nodes[i + 1]))
        for i in range(len(sample.nodes) - 1)
    }


def export_graphml(sample: PathSample, out_path: Path) -> Path:
    out_path = Path(out_path)
    out_path.write_bytes(dump_graph(sample.subgraph))
    return out_path


def export_html(sample: PathSample, out_path: Path, size: int = 900) -> Path:
    """Self-contained node-link HTML rendering of the context subgraph."""
    g = sample.subgraph
    pos = layout_positions(g)
    pad = 60
    scale = size - 2 * pad

    def xy(nid: str) -> tuple[float, float]:
        x, y = pos[nid]
        return pad + x * scale, pad + y * scale

    on_path = set(sample.nodes)
    path_edges = _path_edge_pairs(sample)
    lines = []
    for e in g.edges:
        x1, y1 = xy(e.source)
        x2, y2 = xy(e.target)
        highlighted = frozenset((e.source, e.target)) in path_edges
        stroke = "#d62728" if highlighted else "#b0b0b0"
        width = 2.5 if highlighted else 1.0
        lines.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="{stroke}" stroke-width="{width}">'
            f"<title>{html.escape(e.relation)}</title></line>"
        )
    circles = []
    for nid, node in sorted(g.nodes.items()):
        x, y = xy(nid)
        fill = "#d62728" if nid in on_path else "#1f77b4"
        radius = 7 if nid in on_path else 5
        circles.append(
            f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{radius}" fill="{fill}">'
            f"<title>{html.escape(node.label)}</title></circle>"
            f'<text x="{x + 8:.1f}" y="{y + 4:.1f}" font-size="10">{html.escape(node.label)}</text>'
        )
    title = html.escape(
        f"{sample.labels[0]} to {sample.labels[-1]}" if sample.labels else "subgraph"
    )
    document = f"""<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>{title}</title></head>
<body style="font-family: sans-serif">
<h2>{title}</h2>
<p>{g.node_count} nodes, {g.edge_count} edges; path nodes and edges in red.</p>
<svg width="{size}" height="{size}" viewBox="0 0 {size} {size}">
{chr(10).join(lines)}
{chr(10).join(circles)}
</svg>
</body>
</html>
"""
    out_path = Path(out_path)
    out_path.write_text(document, encoding="utf-8")
    return out_path


def render_figure(sample: PathSample, out_path: Path, dpi: int = 150) -> Path:
    """Matplotlib node-link figure of the subgraph, path highlighted."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    g = sample.subgraph
    pos = layout_positions(g)
    on_path = set(sample.nodes)
    path_edges = _path_edge_pairs(sample)

    fig, ax = plt.subplots(figsize=(9, 9))
    for e in g.edges:
        x1, y1 = pos[e.source]
        x2, y2 = pos[e.target]
        highlighted = frozenset((e.source, e.target)) in path_edges
        ax.plot(
            [x1, x2], [y1, y2],
            color="#d62728" if highlighted else "#c0c0c0",
            linewidth=2.0 if highlighted else 0.6,
            zorder=1 if not highlighted else 2,
        )
    xs = {True: [], False: []}
    ys = {True: [], False: []}
    for nid in g.nodes:
        flag = nid in on_path
        xs[flag].append(pos[nid][0])
        ys[flag].append(pos[nid][1])
    ax.scatter(xs[False], ys[False], s=25, c="#1f77b4", zorder=3)
    ax.scatter(xs[True], ys[True], s=70, c="#d62728", zorder=4)
    for nid in on_path:
        x, y = pos[nid]
        ax.annotate(g.label(nid), (x, y), textcoords="offset points", xytext=(5, 5), fontsize=8)
    if sample.labels:
        ax.set_title(f"{sample.labels[0]}  →  {sample.labels[-1]}")
    ax.set_axis_off()
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
    return out_path
