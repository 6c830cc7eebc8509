import json

import numpy as np
import pytest

from ideagraph.errors import ArgumentError, CacheInvalidError, EmptyInputError, PartialEmbeddingError
from ideagraph.graph.embeddings import ensure_embeddings, nearest_node, read_cache
from ideagraph.llm.backends import LlmGateway, ScriptedEmbeddingBackend

from conftest import make_graph


def orthonormal_backend(labels, tag="orthonormal-test"):
    dim = len(labels)
    return ScriptedEmbeddingBackend(
        {label: np.eye(dim)[i] for i, label in enumerate(labels)}, model_tag=tag
    )


class TestEnsureEmbeddings:
    def test_full_coverage_and_call_count(self, tiny5, tmp_path):
        backend = orthonormal_backend([n.label for n in tiny5.nodes.values()])
        store = ensure_embeddings(tiny5, LlmGateway(embeddings=backend), tmp_path / "cache.jsonl")
        assert len(store.vectors) == 5
        assert backend.calls == 5
        store.check_invariants()

    def test_cache_hit_skips_gateway(self, tiny5, tmp_path):
        cache = tmp_path / "cache.jsonl"
        backend = orthonormal_backend([n.label for n in tiny5.nodes.values()])
        gateway = LlmGateway(embeddings=backend)
        ensure_embeddings(tiny5, gateway, cache)
        again = ensure_embeddings(tiny5, gateway, cache)
        assert backend.calls == 5  # second run: 0 new calls
        assert len(again.vectors) == 5

    def test_new_nodes_appended(self, tiny5, tmp_path):
        cache = tmp_path / "cache.jsonl"
        labels = [n.label for n in tiny5.nodes.values()]
        backend = orthonormal_backend(labels + ["brand new"], tag="t")
        gateway = LlmGateway(embeddings=backend)
        ensure_embeddings(tiny5, gateway, cache)
        bigger = make_graph(
            [(nid, n.label) for nid, n in tiny5.nodes.items()] + [("n6", "brand new")],
            [(e.source, e.target, e.relation) for e in tiny5.edges],
        )
        store = ensure_embeddings(bigger, gateway, cache)
        assert backend.calls == 6  # only the one new label hit the gateway
        assert len(store.vectors) == 6
        header, records = read_cache(cache)
        assert len(records) == 6
        assert header["model_tag"] == "t"

    def test_non_normalized_vectors_normalized(self, tmp_path):
        g = make_graph([("x", "xray")], [])
        backend = ScriptedEmbeddingBackend({"xray": [3.0, 4.0]}, model_tag="t")
        store = ensure_embeddings(g, LlmGateway(embeddings=backend), tmp_path / "c.jsonl")
        assert np.allclose(store.vectors["x"], [0.6, 0.8])
        assert abs(np.linalg.norm(store.vectors["x"]) - 1.0) <= 1e-6

    def test_model_tag_mismatch_rebuilds(self, tiny5, tmp_path):
        cache = tmp_path / "cache.jsonl"
        labels = [n.label for n in tiny5.nodes.values()]
        first = orthonormal_backend(labels, tag="model-a")
        ensure_embeddings(tiny5, LlmGateway(embeddings=first), cache)
        second = orthonormal_backend(labels, tag="model-b")
        store = ensure_embeddings(tiny5, LlmGateway(embeddings=second), cache)
        assert second.calls == 5  # cache invalidated wholesale
        header, _ = read_cache(cache)
        assert header["model_tag"] == "model-b"
        assert store.model_tag == "model-b"

    def test_dimension_mismatch_with_cache(self, tiny5, tmp_path):
        cache = tmp_path / "cache.jsonl"
        labels = [n.label for n in tiny5.nodes.values()]
        ensure_embeddings(tiny5, LlmGateway(embeddings=orthonormal_backend(labels)), cache)
        bigger = make_graph(
            [(nid, n.label) for nid, n in tiny5.nodes.items()] + [("n6", "extra")],
            [],
        )
        clash = ScriptedEmbeddingBackend({"extra": [1.0, 0.0]}, model_tag="orthonormal-test")
        with pytest.raises(CacheInvalidError):
            ensure_embeddings(bigger, LlmGateway(embeddings=clash), cache)

    def test_gateway_failure_lists_uncovered(self, tiny5, tmp_path):
        backend = orthonormal_backend(["silk"])  # knows only one label

        class Flaky(ScriptedEmbeddingBackend):
            pass

        with pytest.raises(PartialEmbeddingError) as err:
            ensure_embeddings(tiny5, LlmGateway(embeddings=backend), tmp_path / "c.jsonl")
        assert len(err.value.uncovered) == 5

    def test_works_without_cache_path(self, tiny5):
        backend = orthonormal_backend([n.label for n in tiny5.nodes.values()])
        store = ensure_embeddings(tiny5, LlmGateway(embeddings=backend), None)
        assert len(store.vectors) == 5


class TestNearestNode:
    def test_exact_label_self_similarity(self, tiny5, tiny5_embeddings):
        store, gateway, _ = tiny5_embeddings
        node, sim = nearest_node(tiny5, store, "silk", gateway)
        assert node == "n1"
        assert abs(sim - 1.0) <= 1e-6

    def test_every_label_maps_to_its_node(self, tiny5, tiny5_embeddings):
        store, gateway, _ = tiny5_embeddings
        for nid, record in tiny5.nodes.items():
            found, _ = nearest_node(tiny5, store, record.label, gateway)
            assert found == nid

    def test_whitespace_normalization(self, tiny5, tiny5_embeddings):
        store, gateway, _ = tiny5_embeddings
        assert nearest_node(tiny5, store, "  silk \n", gateway) == nearest_node(
            tiny5, store, "silk", gateway
        )

    def test_tie_breaks_to_smallest_id(self):
        g = make_graph([("b", "twin one"), ("a", "twin two")], [("a", "b", "r")])
        shared = np.array([1.0, 0.0])
        backend = ScriptedEmbeddingBackend(
            {"twin one": shared, "twin two": shared, "query": shared}, model_tag="t"
        )
        gateway = LlmGateway(embeddings=backend)
        store = ensure_embeddings(g, gateway, None)
        node, sim = nearest_node(g, store, "query", gateway)
        assert node == "a"
        assert abs(sim - 1.0) <= 1e-6

    def test_empty_query_rejected(self, tiny5, tiny5_embeddings):
        store, gateway, _ = tiny5_embeddings
        with pytest.raises(ArgumentError):
            nearest_node(tiny5, store, "   ", gateway)

    def test_similarity_in_range(self, tiny5, tiny5_embeddings):
        store, gateway, _ = tiny5_embeddings
        _, sim = nearest_node(tiny5, store, "biopolymers", gateway)
        assert -1.0 <= sim <= 1.0


class TestCacheFormat:
    def test_header_first_line(self, tiny5, tmp_path):
        cache = tmp_path / "cache.jsonl"
        backend = orthonormal_backend([n.label for n in tiny5.nodes.values()])
        ensure_embeddings(tiny5, LlmGateway(embeddings=backend), cache)
        first = json.loads(cache.read_text().splitlines()[0])
        assert first["format"] == "ideagraph-embeddings"
        assert first["dimension"] == 5
        assert "model_tag" in first

    def test_unit_norm_invariant_after_every_call(self, tiny5, tmp_path):
        cache = tmp_path / "cache.jsonl"
        backend = ScriptedEmbeddingBackend(
            {n.label: np.full(4, 2.0) * (i + 1) for i, n in enumerate(tiny5.nodes.values())},
            model_tag="denorm",
        )
        store = ensure_embeddings(tiny5, LlmGateway(embeddings=backend), cache)
        for vec in store.vectors.values():
            assert abs(np.linalg.norm(vec) - 1.0) <= 1e-6
