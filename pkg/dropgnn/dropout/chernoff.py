"""Monte-Carlo validation of the run-count concentration bounds."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, Field

from dropgnn.dropout.probability import (
    MAX_ENUMERATION_GAMMA,
    expected_one,
    monte_carlo_tolerance,
    optimal_p,
    runs_k_separated,
    runs_one_complete,
)
from dropgnn.errors import EnumerationLimitError

log = logging.getLogger(__name__)


class Regime(str, Enum):
    ONE_COMPLETE = "one_complete"
    K_SEPARATED = "k_separated"


class RunBudget(BaseModel):
    r: int = Field(ge=1, description="number of runs")
    delta: float = Field(gt=0, le=1, description="concentration slack")
    t: float = Field(gt=1, description="inverse error probability")
    regime: Regime = Regime.ONE_COMPLETE

    @classmethod
    def from_bound(
        cls, gamma: int, delta: float, t: float, regime: Regime = Regime.ONE_COMPLETE
    ) -> RunBudget:
        """Budget whose r is the closed-form bound for ``regime``."""
        return cls(r=required_runs(gamma, delta, t, regime), delta=delta, t=t, regime=regime)


def required_runs(gamma: int, delta: float, t: float, regime: Regime) -> int:
    if Regime(regime) is Regime.K_SEPARATED:
        return runs_k_separated(gamma, delta, t)
    return runs_one_complete(gamma, delta, t)


@dataclass
class ChernoffReport:
    gamma: int
    p: float
    r: int
    delta: float
    t: float
    regime: str
    trials: int
    passes: int
    pass_fraction: float
    required_fraction: float
    tolerance: float
    expected_one: float
    empirical_mean_one: float
    standard_error: float
    required_runs: int

    @property
    def passed(self) -> bool:
        return self.pass_fraction >= self.required_fraction

    @property
    def sufficient(self) -> bool:
        """Whether r reaches the closed-form bound for the regime."""
        return self.r >= self.required_runs

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["passed"] = self.passed
        out["sufficient"] = self.sufficient
        return out


def chernoff_validate(
    gamma: int,
    budget: RunBudget,
    trials: int,
    seed: int,
    p: float | None = None,
) -> ChernoffReport:
    """Fraction of independent r-run batches in which the concentration event holds.

    One-complete: every 1-dropout count X_v lies in [(1-delta) E_1, (1+delta) E_1].
    k-separated: additionally every observed multi-node dropout count stays
    strictly below (1-delta) E_1. Counts only include runs where u survives.
    """
    if gamma > MAX_ENUMERATION_GAMMA:
        raise EnumerationLimitError(
            f"gamma={gamma} exceeds the subset bookkeeping guard of {MAX_ENUMERATION_GAMMA}"
        )
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    p = optimal_p(gamma) if p is None else p
    e1 = expected_one(gamma, p, budget.r)
    low, high = (1.0 - budget.delta) * e1, (1.0 + budget.delta) * e1
    weights = 1 << np.arange(gamma, dtype=np.int64)
    rng = np.random.default_rng(seed)

    passes = 0
    per_trial_mean = np.empty(trials)
    for trial in range(trials):
        dropped = rng.random((budget.r, gamma)) < p
        center_alive = rng.random(budget.r) >= p
        rows = dropped[center_alive]
        sizes = rows.sum(axis=1)
        x_v = rows[sizes == 1].sum(axis=0)
        per_trial_mean[trial] = x_v.mean()
        ok = bool(np.all((x_v >= low) & (x_v <= high)))
        if ok and budget.regime is Regime.K_SEPARATED:
            multi = rows[sizes >= 2].astype(np.int64) @ weights
            if multi.size:
                _, counts = np.unique(multi, return_counts=True)
                ok = bool(counts.max() < low)
        passes += ok

    tolerance = monte_carlo_tolerance(budget.t, trials)
    required = 1.0 - 1.0 / budget.t - tolerance
    se = float(per_trial_mean.std(ddof=1) / math.sqrt(trials)) if trials > 1 else float("nan")
    report = ChernoffReport(
        gamma=gamma,
        p=p,
        r=budget.r,
        delta=budget.delta,
        t=budget.t,
        regime=budget.regime.value,
        trials=trials,
        passes=passes,
        pass_fraction=passes / trials,
        required_fraction=required,
        tolerance=tolerance,
        expected_one=e1,
        empirical_mean_one=float(per_trial_mean.mean()),
        standard_error=se,
        required_runs=required_runs(gamma, budget.delta, budget.t, budget.regime),
    )
    log.info(
        "chernoff gamma=%d r=%d: %d/%d batches pass (need %.3f)",
        gamma,
        budget.r,
        passes,
        trials,
        required,
    )
    return report
