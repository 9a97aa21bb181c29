"""Neighborhood reconstruction from 1-dropout observations with port numbers."""

from __future__ import annotations

import logging
from collections.abc import Collection, Iterable
from dataclasses import dataclass

import numpy as np

from dropgnn.engine.augment import random_ports
from dropgnn.errors import GraphError, NotOneCompleteError
from dropgnn.graphs.core import Graph, d_hop_neighborhood, induced_neighborhood
from dropgnn.graphs.wl import isomorphic_small

log = logging.getLogger(__name__)

# A walk from the center, as the (sender port, receiver port) pair of every hop.
Walk = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PortObservation:
    """What u sees through its port-annotated depth-d unfolding.

    ``full`` is the 0-dropout: every walk of length <= depth. ``views`` holds one
    walk set per observed 1-dropout. ``features`` maps each walk of the full view
    to the features of the node it ends at. Views carry no node identities.
    """

    depth: int
    full: frozenset[Walk]
    views: tuple[frozenset[Walk], ...]
    features: dict[Walk, tuple[float, ...]]


def _walks(g: Graph, u: int, d: int, removed: int | None = None) -> dict[Walk, int]:
    found: dict[Walk, int] = {(): u}
    frontier: list[tuple[Walk, int]] = [((), u)]
    for _ in range(d):
        nxt = []
        for walk, v in frontier:
            for w in g.adjacency[v]:
                if w == removed:
                    continue
                step = walk + ((g.ports[(v, w)], g.ports[(w, v)]),)
                found[step] = w
                nxt.append((step, w))
        frontier = nxt
    return found


def port_observations(
    g: Graph, u: int, d: int, include: Collection[int] | None = None
) -> PortObservation:
    """The 0-dropout and the 1-dropouts of ``include`` (default: every node within d of u)."""
    if g.ports is None:
        raise GraphError("port observations need a graph with port numbers")
    if d < 1:
        raise ValueError(f"depth must be >= 1, got {d}")
    hood = d_hop_neighborhood(g, u, d)
    dropped = hood.others if include is None else tuple(include)
    if u in dropped:
        raise GraphError(f"center node {u} cannot be dropped")

    full = _walks(g, u, d)
    views = tuple(frozenset(_walks(g, u, d, removed=v)) for v in dropped)
    features = {walk: tuple(float(x) for x in g.features[v]) for walk, v in full.items()}
    log.debug("port observations of %d: %d walks, %d views", u, len(full), len(views))
    return PortObservation(d, frozenset(full), views, features)


# ── Reconstruction ────────────────────────────────────────────────────


class _Builder:
    """Incremental reconstruction state; a node is identified by the view that lacks it."""

    def __init__(self, obs: PortObservation) -> None:
        self.obs = obs
        self.views = list(dict.fromkeys(obs.views))
        self.node_of_view: dict[int, int] = {}
        self.walk_of: list[Walk] = [()]
        self.edges: dict[tuple[int, int], tuple[int, int]] = {}

    def absent(self, walk: Walk) -> frozenset[int]:
        return frozenset(i for i, view in enumerate(self.views) if walk not in view)

    def add_node(self, view: int, walk: Walk) -> int:
        node = len(self.walk_of)
        self.node_of_view[view] = node
        self.walk_of.append(walk)
        return node

    def add_edge(self, a: int, b: int, ports: tuple[int, int]) -> None:
        key, oriented = ((a, b), ports) if a < b else ((b, a), (ports[1], ports[0]))
        known = self.edges.setdefault(key, oriented)
        if known != oriented:
            raise NotOneCompleteError(
                f"edge {key} seen with ports {known} and {oriented}; observations are inconsistent"
            )

    def extend(self, node: int, parent: int) -> list[int]:
        """Follow every hop out of ``node``; return the nodes discovered."""
        base = self.walk_of[node]
        gone = self.absent(base)
        new = []
        for walk in sorted(w for w in self.obs.full if len(w) == len(base) + 1 and w[:-1] == base):
            step = walk[-1]
            lost = self.absent(walk)
            if not gone <= lost:
                raise NotOneCompleteError(f"walk {walk} reappears in a view its prefix is lacking")
            diff = lost - gone
            if not diff:
                self.check_return(node, parent, step)
                continue
            if len(diff) > 1:
                raise NotOneCompleteError(f"hop {step} out of node {node} is ambiguous")
            (view,) = diff
            target = self.node_of_view.get(view)
            if target is None:
                target = self.add_node(view, walk)
                new.append(target)
            self.add_edge(node, target, step)
        return new

    def check_return(self, node: int, parent: int, step: tuple[int, int]) -> None:
        back = self.edges.get((min(node, parent), max(node, parent)))
        if node != parent and back is not None:
            expected = (back[1], back[0]) if node > parent else back
            if step == expected:
                return
        raise NotOneCompleteError(f"hop {step} out of node {node} leads to no observed dropout")


def port_reconstruct(obs: PortObservation, d: int | None = None) -> Graph:
    """Rebuild u's d-hop neighborhood (u becomes node 0, then discovery order).

    Level by level, each boundary node is extended by every port the full view
    shows. The views that lose the extended walk but not its prefix name the node
    the hop reaches: none means the hop returns to the parent, one means a known
    or new node. Anything else means some 1-dropout is missing and raises
    NotOneCompleteError. Edges between two nodes at distance d stay invisible.
    """
    d = obs.depth if d is None else d
    if d < 1 or d > obs.depth:
        raise ValueError(f"depth must lie in 1..{obs.depth}, got {d}")
    builder = _Builder(obs)
    parent_of = {0: 0}
    boundary = [0]
    for level in range(1, d + 1):
        nxt: list[int] = []
        for node in boundary:
            for child in builder.extend(node, parent_of[node]):
                parent_of[child] = node
                nxt.append(child)
        log.debug("level %d: %d new nodes", level, len(nxt))
        boundary = nxt

    if len(builder.node_of_view) != len(builder.views):
        raise NotOneCompleteError(
            f"{len(builder.views) - len(builder.node_of_view)} views match no reconstructed node"
        )
    feats = np.array([obs.features[walk] for walk in builder.walk_of])
    return Graph.from_edges(len(builder.walk_of), list(builder.edges), feats)


# ── Randomized oracle ─────────────────────────────────────────────────


def random_connected_graph(rng: np.random.Generator, n: int, max_degree: int) -> Graph:
    """A random spanning tree plus extra edges, all degrees capped at ``max_degree``."""
    if max_degree < 2 and n > 2:
        raise ValueError(f"max_degree must be >= 2 for {n} nodes")
    degree = [0] * n
    edges: set[tuple[int, int]] = set()
    order = rng.permutation(n).tolist()
    for i in range(1, n):
        choices = [v for v in order[:i] if degree[v] < max_degree]
        w = choices[int(rng.integers(len(choices)))]
        v = order[i]
        edges.add((min(v, w), max(v, w)))
        degree[v] += 1
        degree[w] += 1
    for _ in range(int(rng.integers(n + 1))):
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
        key = (min(a, b), max(a, b))
        if key not in edges and degree[a] < max_degree and degree[b] < max_degree:
            edges.add(key)
            degree[a] += 1
            degree[b] += 1
    return Graph.from_edges(n, sorted(edges))


def reconstruction_matches(g: Graph, u: int, d: int) -> bool:
    """Whether the reconstruction is isomorphic to the true d-hop neighborhood."""
    rebuilt = port_reconstruct(port_observations(g, u, d), d)
    truth, _ = induced_neighborhood(g, u, d)
    return isomorphic_small(rebuilt, truth)


def reconstruction_trials(
    trials: int, seed: int, max_nodes: int = 12, max_degree: int = 4, d: int = 3
) -> list[bool]:
    """Reconstruct random connected graphs under random ports; one outcome per trial."""
    rng = np.random.default_rng(seed)
    outcomes = []
    for trial in range(trials):
        n = int(rng.integers(2, max_nodes + 1))
        g = random_ports(random_connected_graph(rng, n, max_degree), rng)
        u = int(rng.integers(n))
        ok = reconstruction_matches(g, u, d)
        if not ok:
            log.warning("trial %d: reconstruction of %r around %d differs", trial, g, u)
        outcomes.append(ok)
    return outcomes


def reconstructions(
    graphs: Iterable[Graph], u: int, d: int, seed: int
) -> list[Graph]:
    """Reconstruct u's neighborhood in each graph under freshly drawn ports."""
    rng = np.random.default_rng(seed)
    return [port_reconstruct(port_observations(random_ports(g, rng), u, d), d) for g in graphs]
