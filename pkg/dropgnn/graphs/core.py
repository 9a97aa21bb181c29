"""Immutable attributed graph and neighborhood extraction."""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from dropgnn.errors import GraphError


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with per-node features and optional port labels.

    ``ports[(v, w)]`` is the label v assigns to its edge towards w. When ports
    are present, the labels on v's outgoing edges form a permutation of
    ``0..deg(v)-1``.
    """

    node_count: int
    adjacency: tuple[tuple[int, ...], ...]
    features: np.ndarray
    ports: Mapping[tuple[int, int], int] | None = None

    def __post_init__(self) -> None:
        n = self.node_count
        if n < 0:
            raise GraphError(f"node_count must be non-negative, got {n}")
        if len(self.adjacency) != n:
            raise GraphError(f"adjacency has {len(self.adjacency)} rows for {n} nodes")

        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbors of {v} must be sorted and unique: {nbrs}")
            for w in nbrs:
                if not 0 <= w < n:
                    raise GraphError(f"edge {v}-{w} references a node outside 0..{n - 1}")
                if w == v:
                    raise GraphError(f"self-loop at node {v}")
                if v not in self.adjacency[w]:
                    raise GraphError(f"adjacency not symmetric: {v}->{w} without {w}->{v}")

        feats = np.array(self.features, dtype=np.float64, copy=True)
        if feats.ndim != 2 or feats.shape[0] != n or (n > 0 and feats.shape[1] < 1):
            raise GraphError(f"features must have shape ({n}, F>=1), got {feats.shape}")
        feats.flags.writeable = False
        object.__setattr__(self, "features", feats)

        if self.ports is not None:
            ports = {(int(a), int(b)): int(p) for (a, b), p in self.ports.items()}
            expected = sum(len(nbrs) for nbrs in self.adjacency)
            if len(ports) != expected:
                raise GraphError(f"ports cover {len(ports)} directed edges, expected {expected}")
            for v, nbrs in enumerate(self.adjacency):
                try:
                    labels = sorted(ports[(v, w)] for w in nbrs)
                except KeyError as exc:
                    raise GraphError(f"missing port label for directed edge {exc}") from None
                if labels != list(range(len(nbrs))):
                    raise GraphError(
                        f"ports at node {v} are not a permutation of 0..{len(nbrs) - 1}: {labels}"
                    )
            object.__setattr__(self, "ports", MappingProxyType(ports))

    # ── Construction ──────────────────────────────────────────────────

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        features: np.ndarray | Sequence[Sequence[float]] | None = None,
        ports: Mapping[tuple[int, int], int] | None = None,
    ) -> Graph:
        """Build a graph from an undirected edge list.

        Duplicate edges and self-loops are rejected. Features default to the
        constant 1 column.
        """
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for edge in edges:
            a, b = int(edge[0]), int(edge[1])
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge {a}-{b} references a node outside 0..{n - 1}")
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            if b in nbrs[a]:
                raise GraphError(f"duplicate edge {a}-{b}")
            nbrs[a].add(b)
            nbrs[b].add(a)
        feats = np.ones((n, 1)) if features is None else np.asarray(features, dtype=np.float64)
        return cls(
            node_count=n,
            adjacency=tuple(tuple(sorted(s)) for s in nbrs),
            features=feats,
            ports=ports,
        )

    def with_features(self, features: np.ndarray) -> Graph:
        return Graph(self.node_count, self.adjacency, features, self.ports)

    def with_ports(self, ports: Mapping[tuple[int, int], int] | None) -> Graph:
        return Graph(self.node_count, self.adjacency, self.features, ports)

    # ── Queries ───────────────────────────────────────────────────────

    @property
    def feature_dim(self) -> int:
        return int(self.features.shape[1]) if self.node_count else 0

    @property
    def num_edges(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def neighbors(self, v: int) -> tuple[int, ...]:
        self.check_node(v)
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def degrees(self) -> np.ndarray:
        return np.array([len(nbrs) for nbrs in self.adjacency], dtype=np.int64)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as sorted ``(a, b)`` pairs with ``a < b``."""
        return [(v, w) for v, nbrs in enumerate(self.adjacency) for w in nbrs if v < w]

    def directed_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Source and destination arrays of both edge directions, ordered by source."""
        src = [v for v, nbrs in enumerate(self.adjacency) for _ in nbrs]
        dst = [w for nbrs in self.adjacency for w in nbrs]
        return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)

    def port(self, v: int, w: int) -> int:
        if self.ports is None:
            raise GraphError("graph carries no port numbers")
        try:
            return self.ports[(v, w)]
        except KeyError:
            raise GraphError(f"{v}-{w} is not an edge") from None

    def check_node(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise GraphError(f"node id {v} out of range for {self.node_count} nodes")

    def __repr__(self) -> str:
        ports = ", ports" if self.ports is not None else ""
        return f"Graph(n={self.node_count}, m={self.num_edges}, F={self.feature_dim}{ports})"


def relabel(g: Graph, permutation: Sequence[int]) -> Graph:
    """Return a copy of ``g`` in which node ``i`` becomes node ``permutation[i]``."""
    perm = np.asarray(permutation, dtype=np.int64)
    if sorted(perm.tolist()) != list(range(g.node_count)):
        raise GraphError("relabeling must be a permutation of the node ids")
    edges = [(int(perm[a]), int(perm[b])) for a, b in g.edges()]
    feats = np.empty_like(g.features)
    feats[perm] = g.features
    ports = None
    if g.ports is not None:
        ports = {(int(perm[a]), int(perm[b])): p for (a, b), p in g.ports.items()}
    return Graph.from_edges(g.node_count, edges, feats, ports)


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    """Place graphs side by side; node ids of later graphs are shifted."""
    if not graphs:
        return Graph.from_edges(0, [], np.zeros((0, 1)))
    dims = {g.feature_dim for g in graphs if g.node_count}
    if len(dims) > 1:
        raise GraphError(f"cannot join graphs with feature dimensions {sorted(dims)}")
    offset = 0
    edges: list[tuple[int, int]] = []
    has_ports = all(g.ports is not None for g in graphs)
    ports: dict[tuple[int, int], int] = {}
    for g in graphs:
        edges.extend((a + offset, b + offset) for a, b in g.edges())
        if has_ports:
            ports.update({(a + offset, b + offset): p for (a, b), p in g.ports.items()})
        offset += g.node_count
    feats = np.concatenate([g.features for g in graphs], axis=0)
    return Graph.from_edges(offset, edges, feats, ports if has_ports else None)


# ── d-hop neighborhoods ───────────────────────────────────────────────


@dataclass(frozen=True)
class Neighborhood:
    """Nodes within distance d of ``center`` and the edges a d-round GNN can see."""

    center: int
    depth: int
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    distance: Mapping[int, int]

    @property
    def gamma(self) -> int:
        """Size of the neighborhood of interest, excluding the center."""
        return len(self.nodes) - 1

    @property
    def others(self) -> tuple[int, ...]:
        return tuple(v for v in self.nodes if v != self.center)


def bfs_distances(g: Graph, u: int, limit: int | None = None) -> dict[int, int]:
    g.check_node(u)
    dist = {u: 0}
    queue = deque([u])
    while queue:
        v = queue.popleft()
        if limit is not None and dist[v] >= limit:
            continue
        for w in g.adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def d_hop_neighborhood(g: Graph, u: int, d: int) -> Neighborhood:
    """Nodes at distance <= d from u plus induced edges, minus edges between two distance-d nodes.

    Nodes are ordered by (distance, id); ``gamma`` excludes u itself.
    """
    if d < 0:
        raise ValueError(f"depth must be non-negative, got {d}")
    dist = bfs_distances(g, u, limit=d)
    nodes = tuple(sorted(dist, key=lambda v: (dist[v], v)))
    edges = tuple(
        (a, b)
        for a, b in g.edges()
        if a in dist and b in dist and not (dist[a] == d and dist[b] == d)
    )
    return Neighborhood(center=u, depth=d, nodes=nodes, edges=edges, distance=dist)


def induced_neighborhood(g: Graph, u: int, d: int) -> tuple[Graph, tuple[int, ...]]:
    """The d-hop neighborhood as a standalone graph (u becomes node 0).

    Returns the graph and the original id of every new node.
    """
    hood = d_hop_neighborhood(g, u, d)
    index = {v: i for i, v in enumerate(hood.nodes)}
    edges = [(index[a], index[b]) for a, b in hood.edges]
    feats = g.features[list(hood.nodes)]
    return Graph.from_edges(len(hood.nodes), edges, feats), hood.nodes
