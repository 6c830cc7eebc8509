from .search import best_first_path, bfs_distances, minimum_hop_path, sample, sample_path, shortest_path
from .serialize import render_path_string, serialize_path
from .subgraph import extract_subgraph
from .types import PathConfig, PathSample
from .viz import export_graphml, export_html, layout_positions, render_figure

__all__ = [
    "PathConfig",
    "PathSample",
    "best_first_path",
    "bfs_distances",
    "export_graphml",
    "export_html",
    "extract_subgraph",
    "layout_positions",
    "minimum_hop_path",
    "render_figure",
    "render_path_string",
    "sample",
    "sample_path",
    "serialize_path",
    "shortest_path",
]
