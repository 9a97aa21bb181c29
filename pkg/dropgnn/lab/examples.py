"""Small separating examples and exact output distributions of the analytic networks."""

from __future__ import annotations

import itertools
import logging
from collections import defaultdict

import numpy as np

from dropgnn.dropout.probability import MAX_ENUMERATION_GAMMA
from dropgnn.engine.analytic import analytic_example2
from dropgnn.engine.forward import gnn_forward
from dropgnn.engine.model import DropoutMode, GnnModel
from dropgnn.errors import EnumerationLimitError
from dropgnn.graphs.core import Graph, d_hop_neighborhood
from dropgnn.graphs.families import cycle_graph, star_graph

log = logging.getLogger(__name__)


def example_pair(n: int) -> tuple[Graph, Graph, int]:
    """The WL-equivalent pair of example ``n`` (1, 2 or 3) and the node u to compare."""
    if n == 1:
        return cycle_graph(4), cycle_graph(8), 0
    if n == 2:
        triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3)])
        chorded = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 3)])
        return triangles, chorded, 0
    if n == 3:
        left = star_graph(2).with_features(np.array([[1.0], [1.0], [-1.0]]))
        right = star_graph(4).with_features(np.array([[1.0], [1.0], [1.0], [-1.0], [-1.0]]))
        return left, right, 0
    raise ValueError(f"example must be 1, 2 or 3, got {n}")


def _require_removal(model: GnnModel) -> None:
    if model.dropout_mode is not DropoutMode.REMOVE_NODES:
        raise ValueError("exact dropout oracles need a model that removes dropped nodes")


def node_value(model: GnnModel, g: Graph, u: int, removed: tuple[int, ...] = ()) -> float:
    """u's final scalar embedding after removing ``removed``."""
    mask = np.zeros(g.node_count, dtype=bool)
    mask[list(removed)] = True
    return float(gnn_forward(model, g, mask).node_embeddings[u, 0])


def dropout_values(
    model: GnnModel, g: Graph, u: int, d: int, k: int
) -> list[tuple[tuple[int, ...], float]]:
    """(subset, u's value) for every k-node dropout of u's d-hop neighborhood."""
    _require_removal(model)
    others = d_hop_neighborhood(g, u, d).others
    return [(s, node_value(model, g, u, s)) for s in itertools.combinations(others, k)]


def output_distribution(
    model: GnnModel, g: Graph, u: int, p: float, d: int
) -> dict[float, float]:
    """Exact distribution of u's final value, conditioned on u surviving.

    Every dropout S of the d-hop neighborhood contributes p^|S| (1-p)^(gamma-|S|).
    """
    _require_removal(model)
    if not 0.0 <= p < 1.0:
        raise ValueError(f"dropout probability must lie in [0, 1), got {p}")
    others = d_hop_neighborhood(g, u, d).others
    gamma = len(others)
    if gamma > MAX_ENUMERATION_GAMMA:
        raise EnumerationLimitError(f"gamma={gamma} is too large to enumerate all dropouts")
    dist: dict[float, float] = defaultdict(float)
    for k in range(gamma + 1):
        weight = p**k * (1.0 - p) ** (gamma - k)
        for subset in itertools.combinations(others, k):
            dist[node_value(model, g, u, subset)] += weight
    log.debug("output_distribution: %d subsets over gamma=%d", 2**gamma, gamma)
    return dict(sorted(dist.items()))


def cycle_dropouts(
    g: Graph, u: int, max_k: int, rounds: int = 3
) -> dict[int, list[tuple[int, ...]]]:
    """Dropouts of size 1..max_k after which the cycle detector leaves u at 1."""
    model = analytic_example2(rounds=rounds)
    found: dict[int, list[tuple[int, ...]]] = {}
    for k in range(1, max_k + 1):
        found[k] = [s for s, value in dropout_values(model, g, u, rounds, k) if value == 1.0]
    return found
