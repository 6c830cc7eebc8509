"""Seeded random selection of concept pairs."""

from __future__ import annotations

import random

from ..errors import EmptyInputError
from .model import KnowledgeGraph


def random_node_pair(g: KnowledgeGraph, seed: int) -> tuple[str, str]:
    """Two distinct node ids, uniform without replacement, reproducible by seed.

    Candidates are sorted before sampling so the draw does not depend on
    dict insertion order.
    """
    if g.node_count < 2:
        raise EmptyInputError("need at least 2 nodes to draw a pair")
    rng = random.Random(seed)
    first, second = rng.sample(sorted(g.nodes), 2)
    return first, second
