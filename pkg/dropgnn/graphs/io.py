"""JSON serialization of graphs.

Format: ``{"format": "dropgnn.graph", "version": 1, "n": int, "edges": [[u, v], ...],
"features": [[...], ...], "ports": [[u, v, port_uv, port_vu], ...]}`` with ``ports``
optional and edges sorted.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from dropgnn.errors import GraphError
from dropgnn.graphs.core import Graph

GRAPH_FORMAT = "dropgnn.graph"
GRAPH_VERSION = 1


def graph_to_json(g: Graph) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "format": GRAPH_FORMAT,
        "version": GRAPH_VERSION,
        "n": g.node_count,
        "edges": [[a, b] for a, b in g.edges()],
        "features": g.features.tolist(),
    }
    if g.ports is not None:
        doc["ports"] = [[a, b, g.ports[(a, b)], g.ports[(b, a)]] for a, b in g.edges()]
    return doc


def graph_from_json(doc: dict[str, Any]) -> Graph:
    if doc.get("format", GRAPH_FORMAT) != GRAPH_FORMAT:
        raise GraphError(f"not a graph document: format={doc.get('format')!r}")
    if doc.get("version", GRAPH_VERSION) > GRAPH_VERSION:
        raise GraphError(f"unsupported graph version {doc['version']}")
    try:
        n = int(doc["n"])
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph document: {exc}") from None
    features = doc.get("features")
    feats = np.asarray(features, dtype=np.float64) if features is not None else None
    if feats is not None and n == 0:
        feats = feats.reshape(0, 1)
    ports = None
    if doc.get("ports") is not None:
        ports = {}
        for a, b, pab, pba in doc["ports"]:
            ports[(int(a), int(b))] = int(pab)
            ports[(int(b), int(a))] = int(pba)
    return Graph.from_edges(n, edges, feats, ports)


def save_graph(g: Graph, path: str | Path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(graph_to_json(g), sort_keys=True))
    return str(path)


def load_graph(path: str | Path) -> Graph:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Graph file not found: {path}")
    return graph_from_json(json.loads(path.read_text()))
