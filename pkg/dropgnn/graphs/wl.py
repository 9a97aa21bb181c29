"""1-WL color refinement and exact isomorphism for small graphs."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

import networkx as nx
import numpy as np

from dropgnn.errors import EnumerationLimitError
from dropgnn.graphs.core import Graph, disjoint_union

log = logging.getLogger(__name__)

MAX_ISOMORPHISM_NODES = 16


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]
    round: int

    @property
    def num_colors(self) -> int:
        return len(set(self.colors))

    def histogram(self) -> Counter:
        return Counter(self.colors)

    def partition(self) -> frozenset[frozenset[int]]:
        classes: dict[int, set[int]] = {}
        for v, c in enumerate(self.colors):
            classes.setdefault(c, set()).add(v)
        return frozenset(frozenset(s) for s in classes.values())


def _canonical(keys: list) -> tuple[int, ...]:
    ids: dict = {}
    out = []
    for key in keys:
        if key not in ids:
            ids[key] = len(ids)
        out.append(ids[key])
    return tuple(out)


def _feature_key(row: np.ndarray) -> tuple[float, ...]:
    return tuple(float(x) for x in row)


def _refinement_sequence(g: Graph, rounds: int) -> list[Coloring]:
    colors = _canonical([_feature_key(row) for row in g.features])
    history = [Coloring(colors, 0)]
    for t in range(1, rounds + 1):
        keys = [
            (colors[v], tuple(sorted(colors[w] for w in g.adjacency[v])))
            for v in range(g.node_count)
        ]
        colors = _canonical(keys)
        history.append(Coloring(colors, t))
    return history


def wl_refine(g: Graph, rounds: int) -> Coloring:
    """Color refinement for ``rounds`` rounds.

    Colors are canonical ids assigned in first-occurrence order over node ids, so
    the result is deterministic without hashing.
    """
    if rounds < 0:
        raise ValueError(f"rounds must be non-negative, got {rounds}")
    return _refinement_sequence(g, rounds)[-1]


def wl_distinguishable(g1: Graph, g2: Graph, rounds: int | None = None) -> bool:
    """True iff the WL color multisets of the two graphs differ at some round <= rounds.

    Both graphs are refined jointly (as one disjoint union) so that color ids
    are comparable. ``rounds=None`` refines until the joint partition is stable.
    """
    if g1.feature_dim != g2.feature_dim and g1.node_count and g2.node_count:
        return True
    if g1.node_count != g2.node_count:
        return True
    union = disjoint_union([g1, g2])
    n1 = g1.node_count
    limit = union.node_count if rounds is None else rounds
    previous: frozenset | None = None
    for coloring in _refinement_sequence(union, limit):
        left = Counter(coloring.colors[:n1])
        right = Counter(coloring.colors[n1:])
        if left != right:
            log.debug("WL separates the graphs at round %d", coloring.round)
            return True
        partition = coloring.partition()
        if rounds is None and partition == previous:
            break
        previous = partition
    return False


def to_networkx(g: Graph) -> nx.Graph:
    graph = nx.Graph()
    for v in range(g.node_count):
        graph.add_node(v, feature=_feature_key(g.features[v]))
    graph.add_edges_from(g.edges())
    return graph


def isomorphic_small(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism test respecting node features (ports ignored).

    Cheap invariants (sizes, degree sequences, WL colors) reject most pairs
    before the VF2 search runs.
    """
    for g in (g1, g2):
        if g.node_count > MAX_ISOMORPHISM_NODES:
            raise EnumerationLimitError(
                f"isomorphic_small supports at most {MAX_ISOMORPHISM_NODES} nodes, "
                f"got {g.node_count}"
            )
    if g1.node_count != g2.node_count or g1.num_edges != g2.num_edges:
        return False
    if sorted(g1.degrees().tolist()) != sorted(g2.degrees().tolist()):
        return False
    if wl_distinguishable(g1, g2):
        return False
    return nx.is_isomorphic(
        to_networkx(g1),
        to_networkx(g2),
        node_match=lambda a, b: a["feature"] == b["feature"],
    )
