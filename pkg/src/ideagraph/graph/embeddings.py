"""Node embeddings: persistent cache, coverage, and nearest-node lookup.

Cache sidecar format (JSON lines, UTF-8), documented for reuse:
  line 1: {"format": "ideagraph-embeddings", "version": 1,
           "model_tag": "...", "dimension": N}
  line 2+: {"id": "<node id>", "vector": [f, ...]}
New vectors are appended; a model_tag mismatch invalidates the whole file
(it is ignored and rebuilt, never silently mixed across models).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from ..errors import ArgumentError, CacheInvalidError, EmptyInputError, PartialEmbeddingError
from ..llm.backends import LlmGateway, normalize
from .model import KnowledgeGraph

logger = logging.getLogger(__name__)

CACHE_FORMAT = "ideagraph-embeddings"
CACHE_VERSION = 1
EMBED_BATCH = 64


@dataclass
class EmbeddingStore:
    """Unit-normalized node vectors for one embedding model."""

    dimension: int
    model_tag: str
    vectors: dict[str, np.ndarray] = field(default_factory=dict)

    def vector(self, node_id: str) -> np.ndarray:
        return self.vectors[node_id]

    def covers(self, g: KnowledgeGraph) -> bool:
        return all(nid in self.vectors for nid in g.nodes)

    def check_invariants(self):
        for nid, v in self.vectors.items():
            if v.size != self.dimension:
                raise CacheInvalidError(
                    f"vector for {nid!r} has dimension {v.size}, expected {self.dimension}"
                )
            if abs(float(np.linalg.norm(v)) - 1.0) > 1e-6:
                raise CacheInvalidError(f"vector for {nid!r} is not unit-normalized")

    def cosine(self, a: str, b: str) -> float:
        return float(np.dot(self.vectors[a], self.vectors[b]))

    def cosine_distance(self, a: str, b: str) -> float:
        return 1.0 - self.cosine(a, b)


def read_cache(path: Path) -> tuple[Optional[dict], dict[str, np.ndarray]]:
    """Load (header, records) from a cache file; (None, {}) when absent/garbled."""
    path = Path(path)
    if not path.exists():
        return None, {}
    records: dict[str, np.ndarray] = {}
    header: Optional[dict] = None
    try:
        with path.open(encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                if not line.strip():
                    continue
                obj = json.loads(line)
                if i == 0:
                    if obj.get("format") != CACHE_FORMAT:
                        raise CacheInvalidError(f"unrecognized cache format in {path}")
                    header = obj
                else:
                    records[obj["id"]] = np.asarray(obj["vector"], dtype=np.float64)
    except (ValueError, KeyError) as exc:
        raise CacheInvalidError(f"corrupt embedding cache {path}: {exc}") from exc
    return header, records


def ensure_embeddings(
    g: KnowledgeGraph,
    gateway: LlmGateway,
    cache_path: Optional[Path] = None,
) -> EmbeddingStore:
    """Guarantee a unit vector for every node label, persisting new ones.

    Cache hits never touch the gateway. A cached model_tag that differs from
    the configured backend invalidates the cache wholesale (rebuilt from
    scratch). A gateway dimension that disagrees with cached vectors raises
    CacheInvalidError; a gateway failure raises PartialEmbeddingError listing
    the node ids still uncovered.
    """
    g.ensure_nonempty()
    model_tag = gateway.embedding_tag
    cached: dict[str, np.ndarray] = {}
    header: Optional[dict] = None
    if cache_path is not None:
        header, records = read_cache(cache_path)
        if header is not None and header.get("model_tag") != model_tag:
            logger.warning(
                "embedding cache %s built with model %r, configured %r; rebuilding",
                cache_path, header.get("model_tag"), model_tag,
            )
            header, records = None, {}
            cache_path.unlink()
        cached = records

    vectors: dict[str, np.ndarray] = {}
    dimension = int(header["dimension"]) if header else 0
    for nid in g.nodes:
        if nid in cached:
            vectors[nid] = normalize(cached[nid])

    missing = [nid for nid in g.nodes if nid not in vectors]
    new_records: dict[str, np.ndarray] = {}
    if missing:
        for start in range(0, len(missing), EMBED_BATCH):
            batch = missing[start : start + EMBED_BATCH]
            labels = [g.nodes[nid].label for nid in batch]
            try:
                batch_vectors = gateway.embed(labels)
            except Exception as exc:
                uncovered = missing[start:]
                raise PartialEmbeddingError(uncovered) from exc
            for nid, vec in zip(batch, batch_vectors):
                if dimension and vec.size != dimension:
                    raise CacheInvalidError(
                        f"gateway returned dimension {vec.size}, cache holds {dimension}"
                    )
                dimension = dimension or vec.size
                vectors[nid] = vec
                new_records[nid] = vec

    if not dimension:
        dimension = next(iter(vectors.values())).size

    store = EmbeddingStore(dimension=dimension, model_tag=model_tag, vectors=vectors)
    store.check_invariants()

    if cache_path is not None and (header is None or new_records):
        _write_cache(cache_path, header, model_tag, dimension, new_records, vectors)
    return store


def _write_cache(
    path: Path,
    header: Optional[dict],
    model_tag: str,
    dimension: int,
    new_records: dict[str, np.ndarray],
    all_vectors: dict[str, np.ndarray],
):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if header is None:
        # fresh file: header plus every known vector
        with path.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps({
                "format": CACHE_FORMAT,
                "version": CACHE_VERSION,
                "model_tag": model_tag,
                "dimension": dimension,
            }) + "\n")
            for nid, vec in all_vectors.items():
                fh.write(json.dumps({"id": nid, "vector": vec.tolist()}) + "\n")
    else:
        with path.open("a", encoding="utf-8") as fh:
            for nid, vec in new_records.items():
                fh.write(json.dumps({"id": nid, "vector": vec.tolist()}) + "\n")


def nearest_node(
    g: KnowledgeGraph,
    store: EmbeddingStore,
    query: str,
    gateway: LlmGateway,
) -> tuple[str, float]:
    """Node whose embedding is most cosine-similar to the embedded query.

    Ties break toward the lexicographically smallest node id. Linear scan;
    adequate at the tens-of-thousands-of-nodes scale this package targets.
    """
    query = query.strip()
    if not query:
        raise ArgumentError("query must be non-empty")
    g.ensure_nonempty()
    [qvec] = gateway.embed([query])
    best_id: Optional[str] = None
    best_sim = -math.inf
    for nid in g.nodes:
        sim = float(np.dot(store.vectors[nid], qvec))
        if sim > best_sim + 1e-12 or (
            abs(sim - best_sim) <= 1e-12 and (best_id is None or nid < best_id)
        ):
            best_id, best_sim = nid, sim
    assert best_id is not None
    return best_id, max(-1.0, min(1.0, best_sim))
