"""GraphML ingestion and serialization.

The loader reads the GraphML dialect produced by common graph tooling:
<key> declarations map attribute names to key ids, <data> elements carry
values. Node labels come from a configurable attribute (default "label",
falling back to the node id); edge relations likewise (default "label",
falling back to the edge's sole data value when unambiguous).
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from typing import BinaryIO

from ..errors import EmptyInputError, GraphIntegrityError, GraphParseError
from .model import EdgeRecord, KnowledgeGraph, NodeRecord

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def load_graph(
    source: BinaryIO | bytes,
    label_attr: str = "label",
    relation_attr: str = "label",
) -> KnowledgeGraph:
    """Parse a GraphML byte stream into a KnowledgeGraph.

    Multi-edges between the same pair and self-loops are kept as distinct
    records. Raises GraphParseError (with line/column) on malformed XML,
    GraphIntegrityError on dangling edges, EmptyInputError on a 0-node graph.
    """
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    if not bytes(data).strip():
        raise EmptyInputError("GraphML input stream is empty")
    try:
        tree = ET.parse(io.BytesIO(data))
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise GraphParseError(f"malformed GraphML: {exc.msg}", line, column) from exc

    root = tree.getroot()
    # key-id lookup per declared target ("node"/"edge"/"all")
    node_keys: dict[str, str] = {}
    edge_keys: dict[str, str] = {}
    for key_el in root.iter():
        if _local(key_el.tag) != "key":
            continue
        name = key_el.get("attr.name") or key_el.get("id", "")
        domain = key_el.get("for", "all")
        if domain in ("node", "all"):
            node_keys[key_el.get("id", "")] = name
        if domain in ("edge", "all"):
            edge_keys[key_el.get("id", "")] = name

    def data_values(el, keys: dict[str, str]) -> dict[str, str]:
        values = {}
        for child in el:
            if _local(child.tag) != "data":
                continue
            name = keys.get(child.get("key", ""), child.get("key", ""))
            values[name] = (child.text or "").strip()
        return values

    nodes: list[NodeRecord] = []
    edges: list[EdgeRecord] = []
    for el in root.iter():
        tag = _local(el.tag)
        if tag == "node":
            node_id = el.get("id")
            if node_id is None:
                raise GraphIntegrityError("node element without an id attribute")
            values = data_values(el, node_keys)
            label = values.get(label_attr, "").strip() or node_id
            nodes.append(NodeRecord(id=node_id, label=label))
        elif tag == "edge":
            src, dst = el.get("source"), el.get("target")
            if src is None or dst is None:
                raise GraphIntegrityError("edge element missing source/target")
            values = data_values(el, edge_keys)
            relation = values.get(relation_attr, "").strip()
            if not relation and len(values) == 1:
                relation = next(iter(values.values())).strip()
            if not relation:
                raise GraphIntegrityError(
                    f"edge {src!r} -> {dst!r} carries no relation "
                    f"(looked for attribute {relation_attr!r})"
                )
            edges.append(EdgeRecord(source=src, target=dst, relation=relation))

    if not nodes:
        raise EmptyInputError("GraphML document contains no nodes")
    return KnowledgeGraph.build(nodes, edges)


def dump_graph(
    g: KnowledgeGraph,
    label_attr: str = "label",
    relation_attr: str = "label",
) -> bytes:
    """Serialize a KnowledgeGraph to GraphML, round-trippable by load_graph."""
    root = ET.Element("graphml", xmlns=GRAPHML_NS)
    ET.SubElement(root, "key", id="d0", attrib={"for": "node", "attr.name": label_attr, "attr.type": "string"})
    ET.SubElement(root, "key", id="d1", attrib={"for": "edge", "attr.name": relation_attr, "attr.type": "string"})
    graph_el = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    for node in g.nodes.values():
        node_el = ET.SubElement(graph_el, "node", id=node.id)
        data = ET.SubElement(node_el, "data", key="d0")
        data.text = node.label
    for edge in g.edges:
        edge_el = ET.SubElement(graph_el, "edge", source=edge.source, target=edge.target)
        data = ET.SubElement(edge_el, "data", key="d1")
        data.text = edge.relation
    buf = io.BytesIO()
    ET.ElementTree(root).write(buf, encoding="utf-8", xml_declaration=True)
    return buf.getvalue()
