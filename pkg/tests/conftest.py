import random
import time
from pathlib import Path

import numpy as np
import pytest

SUITE_BUDGET_SECONDS = 120.0
_suite_start = time.monotonic()
_acceptance_results: list[tuple[str, bool]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_results.append((report.nodeid.split("::")[-1], report.passed))


def pytest_sessionfinish(session, exitstatus):
    elapsed = time.monotonic() - _suite_start
    if elapsed > SUITE_BUDGET_SECONDS and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.monotonic() - _suite_start
    if _acceptance_results:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, ok in _acceptance_results:
            terminalreporter.write_line(f"  {'PASS' if ok else 'FAIL'}  {name}")
    within = elapsed <= SUITE_BUDGET_SECONDS
    terminalreporter.write_line(
        f"  {'PASS' if within else 'FAIL'}  offline suite runtime "
        f"{elapsed:.1f}s (budget {SUITE_BUDGET_SECONDS:.0f}s)"
    )

from ideagraph.graph.embeddings import EmbeddingStore
from ideagraph.graph.graphml import load_graph
from ideagraph.graph.model import EdgeRecord, KnowledgeGraph, NodeRecord
from ideagraph.llm.backends import (
    HashEmbeddingBackend,
    LlmGateway,
    ScriptedBackend,
    ScriptedEmbeddingBackend,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def tiny5():
    return load_graph(FIXTURES.joinpath("tiny5.graphml").read_bytes())


@pytest.fixture
def tiny5_embeddings(tiny5):
    """Orthonormal basis vectors per label: injective, exact self-similarity."""
    labels = [tiny5.nodes[nid].label for nid in sorted(tiny5.nodes)]
    dim = len(labels)
    vectors = {label: np.eye(dim)[i] for i, label in enumerate(labels)}
    backend = ScriptedEmbeddingBackend(vectors, model_tag="orthonormal-test")
    gateway = LlmGateway(embeddings=backend)
    store = EmbeddingStore(
        dimension=dim,
        model_tag=backend.model_tag,
        vectors={nid: vectors[tiny5.nodes[nid].label] for nid in tiny5.nodes},
    )
    return store, gateway, backend


def make_graph(nodes, edges) -> KnowledgeGraph:
    """Build a graph from (id, label) and (source, target, relation) tuples."""
    return KnowledgeGraph.build(
        [NodeRecord(id=i, label=lbl) for i, lbl in nodes],
        [EdgeRecord(source=s, target=t, relation=r) for s, t, r in edges],
    )


def hash_store(g: KnowledgeGraph, dimension: int = 16) -> tuple[EmbeddingStore, LlmGateway]:
    """Deterministic embeddings over node labels for any fixture graph."""
    backend = HashEmbeddingBackend(dimension=dimension)
    gateway = LlmGateway(embeddings=backend)
    vectors = {}
    for nid, node in g.nodes.items():
        [vec] = backend.embed([node.label])
        vectors[nid] = vec
    store = EmbeddingStore(dimension=dimension, model_tag=backend.model_tag, vectors=vectors)
    return store, gateway


def random_connected_graph(rng: random.Random, n_nodes: int, extra_edges: int) -> KnowledgeGraph:
    """Random connected fixture: a spanning tree plus extra random edges."""
    ids = [f"n{i:03d}" for i in range(n_nodes)]
    nodes = [(nid, f"concept {nid}") for nid in ids]
    edges = []
    relations = ["relates to", "includes", "enables", "derives from", "supports"]
    for i in range(1, n_nodes):
        j = rng.randrange(i)
        edges.append((ids[j], ids[i], rng.choice(relations)))
    for _ in range(extra_edges):
        a, b = rng.sample(range(n_nodes), 2)
        edges.append((ids[a], ids[b], rng.choice(relations)))
    return make_graph(nodes, edges)


@pytest.fixture
def scripted_gateway():
    def factory(*responses):
        backend = ScriptedBackend(responses)
        return LlmGateway(chat=backend), backend

    return factory
