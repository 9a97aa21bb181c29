"""Canonical signatures of depth-d unfolding (computation) trees."""

from __future__ import annotations

from collections.abc import Collection
from hashlib import blake2b
from typing import NewType

from dropgnn.errors import GraphError
from dropgnn.graphs.core import Graph

NeighborhoodSignature = NewType("NeighborhoodSignature", str)


def _digest(text: str) -> str:
    return blake2b(text.encode("utf-8"), digest_size=16).hexdigest()


def unfolding_signature(
    g: Graph,
    u: int,
    d: int,
    removed: Collection[int] = frozenset(),
) -> NeighborhoodSignature:
    """Canonical encoding of u's depth-d unfolding tree in ``g`` without ``removed``.

    Children are sorted by their own encodings; with ports, each child entry is
    prefixed by the (sender-side, receiver-side) port pair of its edge so the
    encoding is port-sensitive. Removed nodes vanish together with their edges,
    while surviving edges keep their original port labels.
    """
    g.check_node(u)
    if d < 0:
        raise ValueError(f"depth must be non-negative, got {d}")
    gone = frozenset(removed)
    if u in gone:
        raise GraphError(f"center node {u} cannot be removed")

    memo: dict[tuple[int, int], str] = {}

    def encode(v: int, depth: int) -> str:
        key = (v, depth)
        if key in memo:
            return memo[key]
        label = ",".join(repr(float(x)) for x in g.features[v])
        children: list[str] = []
        if depth > 0:
            for w in g.adjacency[v]:
                if w in gone:
                    continue
                child = encode(w, depth - 1)
                if g.ports is not None:
                    child = f"{g.ports[(v, w)]}:{g.ports[(w, v)]}:{child}"
                children.append(child)
            children.sort()
        memo[key] = _digest(f"({label})[{';'.join(children)}]")
        return memo[key]

    return NeighborhoodSignature(encode(u, d))
