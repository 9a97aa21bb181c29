"""Small named graph families used by the examples, datasets and tests."""

from __future__ import annotations

from collections.abc import Sequence

from dropgnn.graphs.core import Graph


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"a cycle needs at least 3 nodes, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    """Center 0 joined to ``leaves`` leaf nodes."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def cycles_union(lengths: Sequence[int]) -> Graph:
    """Disjoint cycles with the given lengths, numbered consecutively."""
    edges: list[tuple[int, int]] = []
    offset = 0
    for length in lengths:
        if length < 3:
            raise ValueError(f"cycle lengths must be >= 3, got {length}")
        edges.extend((offset + i, offset + (i + 1) % length) for i in range(length))
        offset += length
    return Graph.from_edges(offset, edges)


def prism_graph(k: int) -> Graph:
    """Two k-cycles (nodes 0..k-1 and k..2k-1) joined by the rungs i -- i+k."""
    if k < 3:
        raise ValueError(f"a prism needs cycles of length >= 3, got {k}")
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, i + k) for i in range(k)]
    return Graph.from_edges(2 * k, edges)


def circulant_graph(n: int, skip: int) -> Graph:
    """n-cycle plus the chords i -- (i + skip) mod n."""
    edges = {tuple(sorted((i, (i + 1) % n))) for i in range(n)}
    edges |= {tuple(sorted((i, (i + skip) % n))) for i in range(n)}
    return Graph.from_edges(n, sorted(edges))
