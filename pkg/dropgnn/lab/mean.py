"""Exact single-run oracles for mean and max aggregation under node dropout."""

from __future__ import annotations

import itertools
import logging
import math
from collections import defaultdict
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Literal

from dropgnn.dropout.probability import MAX_ENUMERATION_GAMMA
from dropgnn.errors import EnumerationLimitError

log = logging.getLogger(__name__)

UNSEPARATED: Literal["unseparated"] = "unseparated"


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _max(values: Sequence[float]) -> float:
    return max(values) if values else 0.0


def _check_size(n: int) -> None:
    if n > MAX_ENUMERATION_GAMMA:
        raise EnumerationLimitError(f"{n} elements are too many to enumerate all dropouts")


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"dropout probability must lie in [0, 1], got {p}")


def dropout_outcomes(
    values: Sequence[float],
    p: float,
    reduce: Callable[[Sequence[float]], float] = _mean,
    max_k: int | None = None,
) -> dict[float, float]:
    """Exact distribution of ``reduce`` over the surviving elements.

    Each element is dropped independently with probability p; only dropouts of
    at most ``max_k`` elements are counted. Empty reductions are 0.
    """
    _check_p(p)
    n = len(values)
    _check_size(n)
    top = n if max_k is None else min(max_k, n)
    dist: dict[float, float] = defaultdict(float)
    for k in range(top + 1):
        weight = p**k * (1.0 - p) ** (n - k)
        for dropped in itertools.combinations(range(n), k):
            gone = set(dropped)
            dist[reduce([v for i, v in enumerate(values) if i not in gone])] += weight
    return dict(sorted(dist.items()))


def threshold_probability(values: Sequence[float], tau: float, p: float) -> float:
    """P(mean of the surviving elements >= tau)."""
    return sum(prob for mean, prob in dropout_outcomes(values, p).items() if mean >= tau)


# ── Mean separator ────────────────────────────────────────────────────


@dataclass(frozen=True)
class MeanSeparator:
    """A dropout probability and threshold under which one multiset reaches tau more often.

    ``direction`` is 1 or 2: the multiset more likely to produce a mean >= tau.
    ``bound`` is a lower bound on the exact gap that holds for every input: with
    different means it is 2(1-p)^gamma - 1, from both multisets surviving intact;
    with equal means and sizes it is 3/(16 gamma^2). ``index`` is the first
    differing sorted position (0-based) in the equal-mean case.
    """

    p: float
    tau: float
    direction: int
    bound: float
    index: int | None = None

    def gap(self, s1: Sequence[float], s2: Sequence[float]) -> float:
        """Exact P(mean >= tau) of the favoured multiset minus that of the other."""
        p1 = threshold_probability(s1, self.tau, self.p)
        p2 = threshold_probability(s2, self.tau, self.p)
        return p2 - p1 if self.direction == 2 else p1 - p2


def mean_separator(
    s1: Sequence[float], s2: Sequence[float]
) -> MeanSeparator | Literal["unseparated"]:
    """Pick p and tau so a thresholded mean tells s1 from s2 in a single run.

    Different means: tau is their midpoint and p = 1/(2 gamma), so the 0-dropout
    dominates. Equal means and sizes: tau lies between the leave-one-out means
    at the first differing sorted position and p = 1/(2 gamma^2), so 1-dropouts
    dominate every larger dropout. Equal means with different sizes return
    UNSEPARATED.
    """
    a, b = sorted(s1), sorted(s2)
    if a == b:
        raise ValueError("the two multisets are identical")
    if not a or not b:
        raise ValueError("both multisets must be non-empty")
    gamma = max(len(a), len(b))
    m1, m2 = _mean(a), _mean(b)

    if not math.isclose(m1, m2, rel_tol=0.0, abs_tol=1e-12):
        p = 1.0 / (2 * gamma)
        return MeanSeparator(
            p=p,
            tau=(m1 + m2) / 2.0,
            direction=2 if m2 > m1 else 1,
            bound=2.0 * (1.0 - p) ** gamma - 1.0,
        )
    if len(a) != len(b):
        log.debug("equal means %.6g with sizes %d and %d", m1, len(a), len(b))
        return UNSEPARATED

    i = next(j for j, (x, y) in enumerate(zip(a, b)) if x != y)
    total, n = sum(a), len(a)
    # The multiset with the smaller i-th element has the larger leave-one-out mean.
    loo1, loo2 = (total - a[i]) / (n - 1), (total - b[i]) / (n - 1)
    return MeanSeparator(
        p=1.0 / (2 * gamma**2),
        tau=(loo1 + loo2) / 2.0,
        direction=1 if a[i] < b[i] else 2,
        bound=3.0 / (16.0 * gamma**2),
        index=i,
    )


# ── Same mean, different size ─────────────────────────────────────────


@dataclass
class MeanCounterexample:
    """Two multisets whose 0/1-dropout mean distributions nearly coincide."""

    length: int
    p: float
    s1: list[int]
    s2: list[int]
    zero_probability: tuple[float, float]
    one_dropout_means: tuple[frozenset[float], frozenset[float]]
    one_gap: float
    expected_gap: float

    @property
    def zero_equal(self) -> bool:
        return math.isclose(*self.zero_probability, rel_tol=1e-12)

    @property
    def gap_matches(self) -> bool:
        return math.isclose(self.one_gap, self.expected_gap, rel_tol=1e-9, abs_tol=1e-15)

    @property
    def nonzero_means_equal(self) -> bool:
        return self.one_dropout_means[0] - {0.0} == self.one_dropout_means[1] - {0.0}

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "p": self.p,
            "s1": self.s1,
            "s2": self.s2,
            "p_zero_s1": self.zero_probability[0],
            "p_zero_s2": self.zero_probability[1],
            "one_gap": self.one_gap,
            "expected_gap": self.expected_gap,
        }


def mean_counterexample(length: int, p: float = 0.1) -> MeanCounterexample:
    """{±(l-1)} vs {±l} plus a single 0, each value l/2 times; both means are 0."""
    if length < 2 or length % 2:
        raise ValueError(f"length must be an even integer >= 2, got {length}")
    _check_p(p)
    half = length // 2
    s1 = [-(length - 1)] * half + [length - 1] * half
    s2 = [-length] * half + [0] + [length] * half

    low1 = dropout_outcomes(s1, p, max_k=1)
    low2 = dropout_outcomes(s2, p, max_k=1)
    means1 = frozenset(_mean([v for j, v in enumerate(s1) if j != i]) for i in range(len(s1)))
    means2 = frozenset(_mean([v for j, v in enumerate(s2) if j != i]) for i in range(len(s2)))
    return MeanCounterexample(
        length=length,
        p=p,
        s1=s1,
        s2=s2,
        zero_probability=(low1.get(0.0, 0.0), low2.get(0.0, 0.0)),
        one_dropout_means=(means1, means2),
        one_gap=low1.get(1.0, 0.0) - low2.get(1.0, 0.0),
        expected_gap=half * p**2 * (1.0 - p) ** (length - 1),
    )


# ── Max aggregation ───────────────────────────────────────────────────


@dataclass(frozen=True)
class MaxGap:
    probability: float
    expected: float | None

    @property
    def matches(self) -> bool:
        return self.expected is not None and math.isclose(
            self.probability, self.expected, rel_tol=1e-9, abs_tol=1e-15
        )


def max_aggregation_gap(s1: Sequence[float], s2: Sequence[float], p: float) -> MaxGap:
    """Exact single-run probability that u survives and the two maxima differ.

    The neighbors are coupled by sorted position: neighbor j carries the j-th
    smallest element of s1 in one graph and of s2 in the other, and is dropped
    in both or in neither. When the multisets differ only in their minimum the
    expected value is p^(gamma-1) (1-p)^2.
    """
    _check_p(p)
    a, b = sorted(s1), sorted(s2)
    if len(a) != len(b):
        raise ValueError(f"multisets must have equal size, got {len(a)} and {len(b)}")
    n = len(a)
    _check_size(n)
    differ = 0.0
    for kept in itertools.product((False, True), repeat=n):
        k = n - sum(kept)
        left = _max([x for x, keep in zip(a, kept) if keep])
        right = _max([y for y, keep in zip(b, kept) if keep])
        if left != right:
            differ += p**k * (1.0 - p) ** (n - k)

    only_minimum = n > 0 and a[0] != b[0] and a[1:] == b[1:]
    expected = p ** (n - 1) * (1.0 - p) ** 2 if only_minimum else None
    return MaxGap(probability=(1.0 - p) * differ, expected=expected)
