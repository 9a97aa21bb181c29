"""Exact oracles for what dropout runs can and cannot tell apart."""

from dropgnn.lab.examples import cycle_dropouts, example_pair, output_distribution
from dropgnn.lab.mean import (
    UNSEPARATED,
    MeanSeparator,
    max_aggregation_gap,
    mean_counterexample,
    mean_separator,
    threshold_probability,
)
from dropgnn.lab.ports import (
    PortObservation,
    port_observations,
    port_reconstruct,
    reconstruction_trials,
)
from dropgnn.lab.theorem3 import dropout_equivalent, smallest_separating_k, theorem3_pair

__all__ = [
    "UNSEPARATED",
    "MeanSeparator",
    "PortObservation",
    "cycle_dropouts",
    "dropout_equivalent",
    "example_pair",
    "max_aggregation_gap",
    "mean_counterexample",
    "mean_separator",
    "output_distribution",
    "port_observations",
    "port_reconstruct",
    "reconstruction_trials",
    "smallest_separating_k",
    "theorem3_pair",
    "threshold_probability",
]
