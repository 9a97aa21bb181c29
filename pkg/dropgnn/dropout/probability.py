"""Dropout probabilities, exact k-dropout distributions and run-count bounds."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import pandas as pd
from scipy.stats import binom

from dropgnn.errors import EnumerationLimitError

MAX_ENUMERATION_GAMMA = 25

# Shared by both run-count bounds: r >= 3e/delta^2 * (log-term). chernoff_validate
# checks the resulting r empirically.
CHERNOFF_CONSTANT = 3.0 * math.e


def _check_gamma(gamma: int) -> None:
    if gamma < 1:
        raise ValueError(f"gamma must be >= 1, got {gamma}")


def _check_probability(p: float, *, allow_one: bool = True) -> None:
    upper_ok = p <= 1.0 if allow_one else p < 1.0
    if not (0.0 <= p and upper_ok):
        raise ValueError(f"dropout probability out of range: {p}")


def optimal_p(gamma: int) -> float:
    """Probability maximizing p * (1 - p)**gamma, the chance of one specific 1-dropout."""
    _check_gamma(gamma)
    return 1.0 / (1.0 + gamma)


def subset_probability(k: int, gamma: int, p: float) -> float:
    """Probability that exactly a given k-subset of the neighborhood drops while u survives."""
    return p**k * (1.0 - p) ** (gamma + 1 - k)


def expected_one(gamma: int, p: float, r: int) -> float:
    """Expected number of runs showing one specific 1-dropout."""
    return r * p * (1.0 - p) ** gamma


def bitmask(subset: Iterable[int]) -> int:
    mask = 0
    for i in subset:
        mask |= 1 << int(i)
    return mask


def members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


@dataclass
class DropoutDistribution:
    """Map from dropout subsets of the neighborhood to probability (and optional counts).

    Subsets are keyed by bitmask over neighborhood positions ``0..gamma-1``.
    ``entries`` only covers sizes up to ``max_k``; ``residual_mass`` holds the
    exact mass of larger subsets.
    """

    gamma: int
    p: float
    max_k: int
    entries: dict[int, float]
    residual_mass: float = 0.0
    empirical: dict[int, int] | None = None
    runs_with_center: int | None = None
    nodes: tuple[int, ...] | None = field(default=None)

    @property
    def enumerated_mass(self) -> float:
        return math.fsum(self.entries.values())

    @property
    def total_mass(self) -> float:
        """Should equal 1 - p: the runs in which u survives."""
        return self.enumerated_mass + self.residual_mass

    def probability(self, subset: Iterable[int]) -> float:
        return self.entries.get(bitmask(subset), 0.0)

    def expected_count(self, subset: Iterable[int], r: int) -> float:
        return r * subset_probability(len(set(subset)), self.gamma, self.p)

    def count(self, subset: Iterable[int]) -> int:
        if self.empirical is None:
            raise ValueError("distribution carries no empirical counts")
        return self.empirical.get(bitmask(subset), 0)

    def to_frame(self) -> pd.DataFrame:
        observed = self.empirical or {}
        keys = sorted(set(self.entries) | set(observed), key=lambda m: (bin(m).count("1"), m))
        rows = []
        for mask in keys:
            size = bin(mask).count("1")
            exact = self.entries.get(mask, subset_probability(size, self.gamma, self.p))
            rows.append(
                {
                    "subset_bitmask": mask,
                    "size": size,
                    "probability": exact,
                    "count": observed.get(mask, 0),
                }
            )
        return pd.DataFrame(rows, columns=["subset_bitmask", "size", "probability", "count"])


def exact_distribution(gamma: int, p: float, max_k: int | None = None) -> DropoutDistribution:
    """All dropout subsets of size <= max_k with their exact probabilities.

    Each k-subset has probability p^k (1-p)^(gamma+1-k); the +1 is u surviving.
    The mass of larger subsets comes from the binomial tail.
    """
    _check_gamma(gamma)
    _check_probability(p)
    max_k = gamma if max_k is None else max_k
    if not 0 <= max_k <= gamma:
        raise ValueError(f"max_k must lie in 0..{gamma}, got {max_k}")
    if gamma > MAX_ENUMERATION_GAMMA:
        raise EnumerationLimitError(
            f"gamma={gamma} exceeds the enumeration guard of {MAX_ENUMERATION_GAMMA}"
        )
    entries: dict[int, float] = {}
    for k in range(max_k + 1):
        mass = subset_probability(k, gamma, p)
        for subset in combinations(range(gamma), k):
            entries[bitmask(subset)] = mass
    residual = (1.0 - p) * float(binom.sf(max_k, gamma, p)) if max_k < gamma else 0.0
    return DropoutDistribution(
        gamma=gamma, p=p, max_k=max_k, entries=entries, residual_mass=residual
    )


def empirical_distribution(
    masks: np.ndarray,
    center: int,
    neighborhood: Sequence[int],
    p: float,
    max_k: int | None = None,
) -> DropoutDistribution:
    """Exact distribution over ``neighborhood`` plus observed counts X_S from a mask matrix.

    Runs in which ``center`` is dropped are skipped: u computes no embedding there.
    """
    gamma = len(neighborhood)
    dist = exact_distribution(gamma, p, max_k)
    masks = np.asarray(masks, dtype=bool)
    alive = ~masks[:, center]
    rows = masks[alive][:, list(neighborhood)]
    weights = 1 << np.arange(gamma, dtype=np.int64)
    keys, counts = np.unique(rows.astype(np.int64) @ weights, return_counts=True)
    dist.empirical = {int(k): int(c) for k, c in zip(keys, counts)}
    dist.runs_with_center = int(alive.sum())
    dist.nodes = tuple(int(v) for v in neighborhood)
    return dist


# ── Run-count bounds ──────────────────────────────────────────────────


def _check_bound_args(gamma: int, delta: float, t: float, nodes: int) -> None:
    _check_gamma(gamma)
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    if not t > 1.0:
        raise ValueError(f"t must be > 1, got {t}")
    if nodes < 1:
        raise ValueError(f"nodes must be >= 1, got {nodes}")


def runs_one_complete(gamma: int, delta: float, t: float, nodes: int = 1) -> int:
    """Runs after which every 1-dropout count lies in (1 +- delta) E_1 with prob. >= 1 - 1/t.

    ``nodes`` > 1 extends the union bound to every node of an n-node graph.
    """
    _check_bound_args(gamma, delta, t, nodes)
    value = CHERNOFF_CONSTANT / delta**2 * (gamma + 1) * math.log(2 * gamma * t * nodes)
    return math.ceil(value)


def runs_k_separated(gamma: int, delta: float, t: float, nodes: int = 1) -> int:
    """Runs after which, additionally, every multi-node dropout stays below (1 - delta) E_1."""
    _check_bound_args(gamma, delta, t, nodes)
    value = (
        CHERNOFF_CONSTANT / delta**2 * (gamma + 1) * gamma * math.log(2 * gamma * t * nodes)
    )
    return math.ceil(value)


def monte_carlo_tolerance(t: float, trials: int) -> float:
    """Two-sigma binomial slack on an empirical pass fraction."""
    q = 1.0 / t
    return 2.0 * math.sqrt(q * (1.0 - q) / trials)


def dataset_dropout_p(node_counts: Sequence[int], factor: float = 1.0, rule: str = "mean") -> float:
    """Default dropout probability factor / m for a dataset.

    ``rule`` picks m: ``mean`` (mean node count), ``max`` (largest graph).
    """
    counts = np.asarray(node_counts, dtype=np.float64)
    if counts.size == 0 or np.any(counts < 1):
        raise ValueError("node counts must be a non-empty list of positive integers")
    if rule == "mean":
        m = float(counts.mean())
    elif rule == "max":
        m = float(counts.max())
    else:
        raise ValueError(f"unknown rule '{rule}', expected 'mean' or 'max'")
    return min(factor / m, 0.99)
