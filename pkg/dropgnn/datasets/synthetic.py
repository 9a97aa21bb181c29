"""Generators for the synthetic expressiveness benchmarks.

Every generator is a pure function of its seed. Fixed families (Limits 1/2,
Skip-circles) only permute node ids per seed; random families resample their
structure. All nodes start with the constant feature 1.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np
from tenacity import before_sleep_log, retry, retry_if_exception_type, stop_after_attempt

from dropgnn.dropout.sampling import derive_seed
from dropgnn.engine.model import Task
from dropgnn.errors import GenerationError
from dropgnn.graphs.core import Graph, disjoint_union, relabel
from dropgnn.graphs.families import circulant_graph, cycle_graph, cycles_union, prism_graph

log = logging.getLogger(__name__)

SKIP_LENGTHS = (2, 3, 4, 5, 6, 9, 11, 12, 13, 16)
LCC_CLASSES = (Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1))
CONFIGURATION_ATTEMPTS = 500


@dataclass
class Dataset:
    """Graphs plus labels; node labels are concatenated in graph order."""

    name: str
    graphs: list[Graph]
    labels: np.ndarray
    task: Task
    num_classes: int
    seed: int
    params: dict[str, Any] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.labels = np.asarray(self.labels, dtype=np.int64)
        expected = self.total_nodes if self.task is Task.NODE else len(self.graphs)
        if self.labels.shape != (expected,):
            raise ValueError(
                f"{self.name}: expected {expected} {self.task.value} labels, "
                f"got {self.labels.shape}"
            )

    @property
    def node_counts(self) -> list[int]:
        return [g.node_count for g in self.graphs]

    @property
    def total_nodes(self) -> int:
        return sum(self.node_counts)

    def with_graphs(self, graphs: Sequence[Graph]) -> Dataset:
        return Dataset(
            name=self.name,
            graphs=list(graphs),
            labels=self.labels,
            task=self.task,
            num_classes=self.num_classes,
            seed=self.seed,
            params=dict(self.params),
            meta=dict(self.meta),
        )


def _permute(g: Graph, rng: np.random.Generator) -> tuple[Graph, np.ndarray]:
    perm = rng.permutation(g.node_count)
    return relabel(g, perm.tolist()), perm


def _node_dataset(
    name: str, pairs: Sequence[Graph], seed: int, params: dict[str, Any] | None = None
) -> Dataset:
    """One graph per class; every node is labelled with its graph's index."""
    rng = np.random.default_rng(seed)
    graphs = [_permute(g, rng)[0] for g in pairs]
    labels = np.concatenate([np.full(g.node_count, k) for k, g in enumerate(graphs)])
    return Dataset(name, graphs, labels, Task.NODE, len(graphs), seed, params or {})


# ── Limits ────────────────────────────────────────────────────────────


def gen_limits1(seed: int) -> Dataset:
    """Two 8-cycles against one 16-cycle; WL cannot tell any two nodes apart."""
    return _node_dataset("limits1", [cycles_union([8, 8]), cycle_graph(16)], seed)


def gen_limits2(seed: int) -> Dataset:
    """Two cubes (4-prisms) against one 8-prism; both 3-regular on 16 nodes."""
    cubes = disjoint_union([prism_graph(4), prism_graph(4)])
    return _node_dataset("limits2", [cubes, prism_graph(8)], seed)


# ── 4-cycles ──────────────────────────────────────────────────────────


def count_cycles4(g: Graph) -> int:
    """Number of 4-cycles, by counting common-neighbor pairs over node pairs."""
    adj = [set(nbrs) for nbrs in g.adjacency]
    total = 0
    for a in range(g.node_count):
        for c in range(a + 1, g.node_count):
            common = len(adj[a] & adj[c])
            total += common * (common - 1) // 2
    return total // 2


def _random_cycle_lengths(n: int, rng: np.random.Generator) -> list[int]:
    parts: list[int] = []
    rest = n
    while rest:
        choices = [k for k in range(3, rest + 1) if rest - k == 0 or rest - k >= 3]
        k = int(rng.choice(choices))
        parts.append(k)
        rest -= k
    return parts


def gen_4cycles(seed: int, count: int = 50, nodes: int = 16) -> Dataset:
    """Disjoint unions of cycles on ``nodes`` nodes, labelled by containing a 4-cycle.

    Samples are rejection-drawn until both classes hold half of ``count``.
    """
    if count < 2:
        raise ValueError(f"count must be >= 2, got {count}")
    rng = np.random.default_rng(seed)
    want = {1: count // 2, 0: count - count // 2}
    graphs: list[Graph] = []
    labels: list[int] = []
    draws = 0
    while want[0] or want[1]:
        draws += 1
        if draws > 1000 * count:
            raise GenerationError(f"could not balance 4-cycle classes after {draws} draws")
        g = cycles_union(_random_cycle_lengths(nodes, rng))
        label = int(count_cycles4(g) > 0)
        if want[label]:
            want[label] -= 1
            graphs.append(_permute(g, rng)[0])
            labels.append(label)
    order = rng.permutation(count)
    log.debug("four_cycles: %d draws for %d graphs", draws, count)
    return Dataset(
        "four_cycles",
        [graphs[i] for i in order],
        np.asarray(labels)[order],
        Task.GRAPH,
        2,
        seed,
        {"count": count, "nodes": nodes},
    )


# ── Random regular graphs ─────────────────────────────────────────────


class _Rejected(Exception):
    """A configuration-model pairing produced a self-loop or a multi-edge."""


@retry(
    stop=stop_after_attempt(CONFIGURATION_ATTEMPTS),
    retry=retry_if_exception_type(_Rejected),
    before_sleep=before_sleep_log(log, logging.DEBUG),
    reraise=True,
)
def _pair_stubs(n: int, degree: int, rng: np.random.Generator) -> Graph:
    stubs = rng.permutation(np.repeat(np.arange(n), degree)).reshape(-1, 2)
    edges = set()
    for a, b in stubs.tolist():
        if a == b or (min(a, b), max(a, b)) in edges:
            raise _Rejected
        edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(n, sorted(edges))


def random_regular(n: int, degree: int, rng: np.random.Generator) -> Graph:
    """Uniform simple ``degree``-regular graph by configuration model with rejection."""
    if n * degree % 2 or degree >= n:
        raise ValueError(f"no simple {degree}-regular graph on {n} nodes")
    try:
        return _pair_stubs(n, degree, rng)
    except _Rejected:
        raise GenerationError(
            f"configuration model gave no simple {degree}-regular graph on {n} nodes "
            f"in {CONFIGURATION_ATTEMPTS} attempts"
        ) from None


def local_clustering(g: Graph) -> list[Fraction]:
    """Exact local clustering coefficient per node; nodes of degree < 2 get 0."""
    adj = [set(nbrs) for nbrs in g.adjacency]
    out = []
    for v, nbrs in enumerate(g.adjacency):
        k = len(nbrs)
        if k < 2:
            out.append(Fraction(0))
            continue
        links = sum(1 for i, a in enumerate(nbrs) for b in nbrs[i + 1 :] if b in adj[a])
        out.append(Fraction(2 * links, k * (k - 1)))
    return out


def in_triangle(g: Graph) -> np.ndarray:
    adj = [set(nbrs) for nbrs in g.adjacency]
    return np.array(
        [any(adj[a] & adj[v] for a in nbrs) for v, nbrs in enumerate(g.adjacency)], dtype=bool
    )


def gen_lcc(seed: int, count: int = 6, nodes: int = 10) -> Dataset:
    """Random 3-regular graphs; each node's class is its local clustering coefficient."""
    rng = np.random.default_rng(seed)
    graphs = [random_regular(nodes, 3, rng) for _ in range(count)]
    values = [c for g in graphs for c in local_clustering(g)]
    index = {c: i for i, c in enumerate(LCC_CLASSES)}
    labels = np.array([index[c] for c in values])
    observed = sorted({str(c) for c in values}, key=lambda s: Fraction(s))
    return Dataset(
        "lcc",
        graphs,
        labels,
        Task.NODE,
        len(LCC_CLASSES),
        seed,
        {"count": count, "nodes": nodes},
        {"class_map": {str(c): i for c, i in index.items()}, "observed": observed},
    )


def gen_triangles(seed: int, nodes: int = 60) -> Dataset:
    """One random 3-regular graph; nodes are labelled by triangle membership."""
    rng = np.random.default_rng(seed)
    g = random_regular(nodes, 3, rng)
    labels = in_triangle(g).astype(np.int64)
    return Dataset("triangles", [g], labels, Task.NODE, 2, seed, {"nodes": nodes})


# ── Skip-circles ──────────────────────────────────────────────────────


def gen_skipcircles(seed: int, nodes: int = 41) -> Dataset:
    """41-cycles with chords of one skip length each; the class is the skip index."""
    rng = np.random.default_rng(seed)
    graphs = [_permute(circulant_graph(nodes, s), rng)[0] for s in SKIP_LENGTHS]
    return Dataset(
        "skip_circles",
        graphs,
        np.arange(len(SKIP_LENGTHS)),
        Task.GRAPH,
        len(SKIP_LENGTHS),
        seed,
        {"nodes": nodes, "skips": list(SKIP_LENGTHS)},
    )


# ── Registry ──────────────────────────────────────────────────────────

GENERATORS: dict[str, Callable[..., Dataset]] = {
    "limits1": gen_limits1,
    "limits2": gen_limits2,
    "four_cycles": gen_4cycles,
    "lcc": gen_lcc,
    "triangles": gen_triangles,
    "skip_circles": gen_skipcircles,
}


def generate(family: str, seed: int, count: int | None = None) -> Dataset:
    try:
        generator = GENERATORS[family]
    except KeyError:
        raise ValueError(
            f"Unknown dataset family '{family}'. Expected one of {sorted(GENERATORS)}"
        ) from None
    kwargs = {"count": count} if count is not None and family in ("four_cycles", "lcc") else {}
    dataset = generator(seed, **kwargs)
    log.info(
        "Generated %s (seed=%d): %d graphs, %d nodes",
        family,
        seed,
        len(dataset.graphs),
        dataset.total_nodes,
    )
    return dataset


def make_test_copy(dataset: Dataset) -> Dataset:
    """A fresh draw of the same family under an independent seed."""
    count = dataset.params.get("count")
    return generate(dataset.name, derive_seed(dataset.seed, "test"), count)
