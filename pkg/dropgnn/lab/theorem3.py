"""Hub-and-cycles pairs and the brute-force dropout-equivalence oracle."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import pandas as pd

from dropgnn.errors import EnumerationLimitError
from dropgnn.graphs.core import Graph, d_hop_neighborhood
from dropgnn.graphs.unfolding import NeighborhoodSignature, unfolding_signature

log = logging.getLogger(__name__)

MAX_SUBSETS = 2_000_000


def theorem3_pair(length: int) -> tuple[Graph, Graph, int]:
    """Two cycles of ``length`` vs one cycle of twice that, each with a hub on every cycle node.

    Cycle nodes are 0..2*length-1 and the hub is node 2*length in both graphs.
    """
    if length < 3:
        raise ValueError(f"cycle length must be >= 3, got {length}")
    n = length
    hub = 2 * n
    two = [(i, (i + 1) % n) for i in range(n)] + [(n + i, n + (i + 1) % n) for i in range(n)]
    one = [(i, (i + 1) % hub) for i in range(hub)]
    spokes = [(i, hub) for i in range(hub)]
    return Graph.from_edges(hub + 1, two + spokes), Graph.from_edges(hub + 1, one + spokes), hub


@dataclass
class Witness:
    k: int
    signature: NeighborhoodSignature | None
    count1: int
    count2: int
    subset1: tuple[int, ...] | None = None
    subset2: tuple[int, ...] | None = None


@dataclass
class EquivalenceReport:
    """Per-k signature counts of both observation sets and the first difference, if any."""

    equivalent: bool
    max_k: int
    depth: int
    gamma1: int
    gamma2: int
    counts1: dict[int, Counter] = field(default_factory=dict)
    counts2: dict[int, Counter] = field(default_factory=dict)
    witness: Witness | None = None

    def case_counts(self, k: int) -> tuple[list[int], list[int]]:
        """Sorted subset counts per distinct signature at size k, for both graphs."""
        return sorted(self.counts1[k].values()), sorted(self.counts2[k].values())

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for k in sorted(self.counts1):
            for sig in sorted(set(self.counts1[k]) | set(self.counts2.get(k, {}))):
                rows.append(
                    {
                        "k": k,
                        "signature": sig,
                        "count_g1": self.counts1[k].get(sig, 0),
                        "count_g2": self.counts2.get(k, Counter()).get(sig, 0),
                    }
                )
        return pd.DataFrame(rows, columns=["k", "signature", "count_g1", "count_g2"])


def observation_set(
    g: Graph, u: int, d: int, k: int
) -> tuple[Counter, dict[NeighborhoodSignature, tuple[int, ...]]]:
    """Signature counts of all k-node dropouts under true removal, plus one subset per signature."""
    others = d_hop_neighborhood(g, u, d).others
    counts: Counter = Counter()
    example: dict[NeighborhoodSignature, tuple[int, ...]] = {}
    for subset in itertools.combinations(others, k):
        sig = unfolding_signature(g, u, d, removed=subset)
        counts[sig] += 1
        example.setdefault(sig, subset)
    return counts, example


def _check_budget(gamma: int, max_k: int) -> None:
    total = sum(math.comb(gamma, k) for k in range(min(max_k, gamma) + 1))
    if total > MAX_SUBSETS:
        raise EnumerationLimitError(
            f"{total} dropout subsets (gamma={gamma}, max_k={max_k}) exceed {MAX_SUBSETS}"
        )


def dropout_equivalent(
    g1: Graph, g2: Graph, u1: int, u2: int, d: int, max_k: int
) -> EquivalenceReport:
    """Compare the exact distributions of 0..max_k-node dropout neighborhoods.

    Subsets of equal size have equal probability once both neighborhoods have
    the same size, so the distributions agree iff gamma and the per-size
    signature counts agree. The witness is the smallest separating size.
    """
    if max_k < 0:
        raise ValueError(f"max_k must be >= 0, got {max_k}")
    gamma1 = d_hop_neighborhood(g1, u1, d).gamma
    gamma2 = d_hop_neighborhood(g2, u2, d).gamma
    _check_budget(gamma1, max_k)
    _check_budget(gamma2, max_k)
    report = EquivalenceReport(True, max_k, d, gamma1, gamma2)

    for k in range(max_k + 1):
        c1, ex1 = observation_set(g1, u1, d, k)
        c2, ex2 = observation_set(g2, u2, d, k)
        report.counts1[k], report.counts2[k] = c1, c2
        log.debug("k=%d: %d vs %d signatures", k, len(c1), len(c2))
        if gamma1 != gamma2 and k == 0:
            report.equivalent = False
            report.witness = Witness(0, None, gamma1, gamma2)
            break
        if c1 != c2:
            sig = min(s for s in set(c1) | set(c2) if c1.get(s, 0) != c2.get(s, 0))
            report.equivalent = False
            report.witness = Witness(
                k, sig, c1.get(sig, 0), c2.get(sig, 0), ex1.get(sig), ex2.get(sig)
            )
            break
    return report


def smallest_separating_k(
    g1: Graph, g2: Graph, u1: int, u2: int, d: int, k_limit: int
) -> int | None:
    """Smallest dropout size whose neighborhood distribution differs, or None up to k_limit."""
    report = dropout_equivalent(g1, g2, u1, u2, d, k_limit)
    return None if report.equivalent else report.witness.k
