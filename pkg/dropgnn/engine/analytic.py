"""Hand-set integer networks that separate the small example graph pairs.

All three run with true node removal and report the center's value through an
embedding readout, so the lab oracles can enumerate every dropout exactly.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from dropgnn.engine.model import (
    Activation,
    Aggregation,
    DenseSpec,
    DropoutMode,
    GnnModel,
    LayerSpec,
    RunAggregation,
    Task,
)


def _set(params: dict[str, np.ndarray], spec: DenseSpec, weight, bias) -> None:
    params[f"{spec.name}.weight"] = np.asarray(weight, dtype=np.float64)
    params[f"{spec.name}.bias"] = np.asarray(bias, dtype=np.float64)


def analytic_example1(dropout_p: float = 0.25, run_count: int = 200) -> GnnModel:
    """Two rounds of plain summation (own value plus neighbors, no non-linearity).

    Starting from 1 everywhere, an intact cycle reaches 3 then 9. The run
    transform fires only on a final value of 9, so the transformed sum counts
    the runs in which u saw no dropout within distance 2.
    """
    layers = [LayerSpec(f"layers.{i}", 1, 1, self_coef=1.0) for i in range(2)]
    transform = DenseSpec("run_transform", 1, 1, Activation.STRICT_STEP)
    params: dict[str, np.ndarray] = {}
    _set(params, transform, [[1.0]], [-8.0])
    return GnnModel(
        in_dim=1,
        layers=layers,
        params=params,
        aggregation=Aggregation.SUM,
        task=Task.EMBEDDING,
        run_aggregation=RunAggregation.TRANSFORMED_SUM,
        run_transform=transform,
        run_count=run_count,
        dropout_p=dropout_p,
        dropout_mode=DropoutMode.REMOVE_NODES,
        name="example1",
    )


def analytic_example2(
    dropout_p: float = 1.0 / 6.0, run_count: int = 200, rounds: int = 3
) -> GnnModel:
    """Cycle detector: a node stays at 1 iff it is 1 and exactly two neighbors are 1.

    The neighbor MLP computes the indicator of a neighbor sum equal to 2 from
    strict steps of (x - 1) and (3 - x); the update fires when own value plus
    that indicator reaches 2. After enough rounds u is 1 exactly when its
    surviving component is a cycle.
    """
    params: dict[str, np.ndarray] = {}
    layers = []
    for i in range(rounds):
        prefix = f"layers.{i}"
        lo_hi = DenseSpec(f"{prefix}.neighbor.0", 1, 2, Activation.STRICT_STEP)
        both = DenseSpec(f"{prefix}.neighbor.1", 2, 1, Activation.STRICT_STEP)
        update = DenseSpec(f"{prefix}.update.0", 1, 1, Activation.STEP)
        _set(params, lo_hi, [[1.0, -1.0]], [-1.0, 3.0])
        _set(params, both, [[1.0], [1.0]], [-1.0])
        _set(params, update, [[1.0]], [-2.0])
        layers.append(LayerSpec(prefix, 1, 1, 1.0, [lo_hi, both], [update]))
    return GnnModel(
        in_dim=1,
        layers=layers,
        params=params,
        aggregation=Aggregation.SUM,
        task=Task.EMBEDDING,
        run_aggregation=RunAggregation.MEAN,
        run_count=run_count,
        dropout_p=dropout_p,
        dropout_mode=DropoutMode.REMOVE_NODES,
        name="example2",
    )


def analytic_example3(dropout_p: float = 0.25, run_count: int = 200) -> GnnModel:
    """One round of mean aggregation that ignores the node's own value.

    The run transform step(x - 0.5) maps a neighbor mean of 1 to 1 and every
    other value (1/3, 0, -1/3, -1) to 0. An empty neighborhood averages to 0.
    """
    transform = DenseSpec("run_transform", 1, 1, Activation.STEP)
    params: dict[str, np.ndarray] = {}
    _set(params, transform, [[1.0]], [-0.5])
    return GnnModel(
        in_dim=1,
        layers=[LayerSpec("layers.0", 1, 1, self_coef=0.0)],
        params=params,
        aggregation=Aggregation.MEAN,
        task=Task.EMBEDDING,
        run_aggregation=RunAggregation.MEAN,
        run_transform=transform,
        run_count=run_count,
        dropout_p=dropout_p,
        dropout_mode=DropoutMode.REMOVE_NODES,
        name="example3",
    )


ANALYTIC_MODELS: dict[str, Callable[..., GnnModel]] = {
    "example1": analytic_example1,
    "example2": analytic_example2,
    "example3": analytic_example3,
}


def analytic_model(name: str, **kwargs) -> GnnModel:
    try:
        factory = ANALYTIC_MODELS[name]
    except KeyError:
        raise ValueError(
            f"unknown analytic model '{name}', choose from {sorted(ANALYTIC_MODELS)}"
        ) from None
    return factory(**kwargs)
