"""Cross-entropy on the run-aggregated readout plus the auxiliary per-run term."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dropgnn.engine.forward import RunOutputs
from dropgnn.training.tape import Tape, Var


@dataclass
class LossParts:
    total: Var
    final: float
    aux: float


def final_coefficients(weights: np.ndarray) -> np.ndarray:
    """Per-row coefficients that turn a weighted NLL sum into a weighted mean."""
    weights = np.asarray(weights, dtype=np.float64)
    total = weights.sum()
    return weights / total if total > 0 else np.zeros_like(weights)


def aux_coefficients(present: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Coefficients for the mean over runs of each run's mean CE.

    ``present`` is ``(R, M)``; an entry absent from its run contributes nothing
    and runs with no labelled entries left are skipped.
    """
    w = np.asarray(present, dtype=np.float64) * np.asarray(weights, dtype=np.float64)[None, :]
    per_run = w.sum(axis=1)
    live = per_run > 0
    if not live.any():
        return np.zeros(w.size)
    scale = np.where(live, 1.0 / (live.sum() * np.where(live, per_run, 1.0)), 0.0)
    return (w * scale[:, None]).ravel()


def loss(
    tape: Tape,
    outputs: RunOutputs,
    labels: np.ndarray,
    aux_weight: float = 1.0 / 3.0,
    weights: np.ndarray | None = None,
    use_aux: bool = True,
) -> LossParts:
    """(1 - a) CE(final) + a * mean over runs of CE(run readout).

    ``weights`` selects the labelled rows (all rows by default). With
    ``use_aux`` off, or a = 0, the loss is the plain CE of the final readout.
    """
    labels = np.asarray(labels, dtype=np.int64)
    rows = outputs.final.value.shape[0]
    if labels.shape != (rows,):
        raise ValueError(f"expected {rows} labels, got shape {labels.shape}")
    weights = np.ones(rows) if weights is None else np.asarray(weights, dtype=np.float64)

    final = tape.cross_entropy(outputs.final, labels, final_coefficients(weights))
    if not use_aux or aux_weight == 0.0:
        return LossParts(final, float(final.value), 0.0)

    runs = outputs.per_run_present.shape[0]
    aux = tape.cross_entropy(
        outputs.per_run,
        np.tile(labels, runs),
        aux_coefficients(outputs.per_run_present, weights),
    )
    total = tape.weighted_sum([(1.0 - aux_weight, final), (aux_weight, aux)])
    return LossParts(total, float(final.value), float(aux.value))
