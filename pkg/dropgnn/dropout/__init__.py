from dropgnn.dropout.chernoff import ChernoffReport, Regime, RunBudget, chernoff_validate
from dropgnn.dropout.probability import (
    DropoutDistribution,
    dataset_dropout_p,
    empirical_distribution,
    exact_distribution,
    expected_one,
    monte_carlo_tolerance,
    optimal_p,
    runs_k_separated,
    runs_one_complete,
    subset_probability,
)
from dropgnn.dropout.sampling import DropoutMask, RunBatch, derive_seed, sample_masks

__all__ = [
    "ChernoffReport",
    "DropoutDistribution",
    "DropoutMask",
    "Regime",
    "RunBatch",
    "RunBudget",
    "chernoff_validate",
    "dataset_dropout_p",
    "derive_seed",
    "empirical_distribution",
    "exact_distribution",
    "expected_one",
    "monte_carlo_tolerance",
    "optimal_p",
    "runs_k_separated",
    "runs_one_complete",
    "sample_masks",
    "subset_probability",
]
