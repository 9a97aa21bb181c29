"""Input augmentations that break WL symmetry: ports, node ids, random features."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from dropgnn.dropout.sampling import derive_seed
from dropgnn.engine.model import Augmentation
from dropgnn.errors import DimensionMismatchError
from dropgnn.graphs.core import Graph


def random_ports(g: Graph, rng: np.random.Generator) -> Graph:
    """Number each node's incident edges with a uniformly random permutation of 0..deg-1."""
    ports: dict[tuple[int, int], int] = {}
    for v, nbrs in enumerate(g.adjacency):
        for w, port in zip(nbrs, rng.permutation(len(nbrs)).tolist()):
            ports[(v, w)] = port
    return g.with_ports(ports)


def random_node_ids(g: Graph, rng: np.random.Generator, width: int | None = None) -> Graph:
    width = g.node_count if width is None else width
    if width < g.node_count:
        raise DimensionMismatchError(f"id width {width} is smaller than {g.node_count} nodes")
    ids = np.zeros((g.node_count, width))
    ids[np.arange(g.node_count), rng.permutation(width)[: g.node_count]] = 1.0
    return g.with_features(np.concatenate([g.features, ids], axis=1))


def random_feature(g: Graph, rng: np.random.Generator) -> Graph:
    column = rng.standard_normal((g.node_count, 1))
    return g.with_features(np.concatenate([g.features, column], axis=1))


def augment(
    g: Graph, kind: Augmentation | str, seed: int, id_width: int | None = None
) -> Graph:
    kind = Augmentation(kind)
    rng = np.random.default_rng(seed)
    if kind is Augmentation.PORTS:
        return random_ports(g, rng)
    if kind is Augmentation.NODE_IDS:
        return random_node_ids(g, rng, id_width)
    if kind is Augmentation.RANDOM_FEATURES:
        return random_feature(g, rng)
    return g


def augment_all(
    graphs: Sequence[Graph], kind: Augmentation | str, seed: int, id_width: int | None = None
) -> list[Graph]:
    """Augment each graph with its own child seed of ``seed``."""
    if Augmentation(kind) is Augmentation.NODE_IDS and id_width is None:
        id_width = max(g.node_count for g in graphs)
    return [
        augment(g, kind, derive_seed(seed, "augment", i), id_width) for i, g in enumerate(graphs)
    ]


def max_degree(graphs: Sequence[Graph]) -> int:
    return max(int(g.degrees().max(initial=0)) for g in graphs)
