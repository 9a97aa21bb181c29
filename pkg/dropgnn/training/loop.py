"""Full-batch training and evaluation of GIN / DropGIN models."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import pandas as pd

from dropgnn.config.schemas import TrainConfig
from dropgnn.datasets.synthetic import Dataset
from dropgnn.dropout.sampling import derive_seed
from dropgnn.engine.forward import GraphBatch, forward_batch, sample_keep
from dropgnn.engine.model import GnnModel
from dropgnn.errors import DivergenceError
from dropgnn.training.loss import loss
from dropgnn.training.optim import Adam
from dropgnn.training.tape import Tape

log = logging.getLogger(__name__)


@dataclass
class TrainResult:
    model: GnnModel
    history: pd.DataFrame
    train_acc: float
    test_acc: float | None = None

    def to_dict(self) -> dict:
        return {
            "epochs": len(self.history),
            "final_loss": float(self.history["loss"].iloc[-1]),
            "train_acc": self.train_acc,
            "test_acc": self.test_acc,
        }


def _accuracy(logits: np.ndarray, labels: np.ndarray) -> float:
    return float(np.mean(np.argmax(logits, axis=1) == labels))


def training_step(
    model: GnnModel,
    batch: GraphBatch,
    labels: np.ndarray,
    keep: np.ndarray,
    aux_weight: float,
) -> tuple[float, dict[str, np.ndarray], dict]:
    """Loss, parameter gradients and diagnostics of one train-mode forward with fixed masks."""
    tape = Tape("train")
    out = forward_batch(model, batch, keep, tape)
    parts = loss(tape, out, labels, aux_weight, use_aux=model.uses_dropout)
    total = float(parts.total.value)
    grads = tape.backward(parts.total, model.params) if math.isfinite(total) else {}
    info = {
        "final_loss": parts.final,
        "aux_loss": parts.aux,
        "train_acc": _accuracy(out.final.value, labels),
        "buffers": out.buffer_updates,
    }
    return total, grads, info


def train(
    model: GnnModel,
    dataset: Dataset,
    config: TrainConfig,
    test: Dataset | None = None,
) -> TrainResult:
    """Adam on the whole dataset as one batch, with fresh dropout masks every epoch.

    ``dataset`` and ``test`` must already carry the model's augmentation. Raises
    DivergenceError as soon as the loss stops being finite.
    """
    if not dataset.graphs:
        raise ValueError("cannot train on an empty dataset")
    batch = GraphBatch.from_graphs(dataset.graphs, port_width=model.port_width)
    labels = dataset.labels
    optimizer = Adam()
    rows = []
    last_finite: float | None = None

    log.info(
        "Training %s on %s: %d epochs, r=%d, p=%.4f",
        model.name,
        dataset.name,
        config.epochs,
        model.run_count,
        model.dropout_p,
    )
    for epoch in range(config.epochs):
        keep = sample_keep(model, batch.node_count, derive_seed(config.seed, "epoch", epoch))
        total, grads, info = training_step(model, batch, labels, keep, config.aux_loss_weight)
        if not math.isfinite(total):
            log.error("Loss diverged at epoch %d (last finite %s)", epoch, last_finite)
            raise DivergenceError(epoch, last_finite)
        last_finite = total
        model.commit(info["buffers"])
        lr = config.learning_rate_at(epoch)
        optimizer.step(model.params, grads, lr)
        rows.append(
            {
                "epoch": epoch,
                "lr": lr,
                "loss": total,
                "final_loss": info["final_loss"],
                "aux_loss": info["aux_loss"],
                "train_acc": info["train_acc"],
            }
        )
        if (epoch + 1) % config.log_every == 0:
            log.info(
                "epoch %4d  loss=%.4f  aux=%.4f  train_acc=%.3f  lr=%.5f",
                epoch + 1,
                total,
                info["aux_loss"],
                info["train_acc"],
                lr,
            )

    eval_seed = derive_seed(config.seed, "eval")
    train_acc = evaluate(model, dataset, eval_seed)
    test_acc = evaluate(model, test, derive_seed(eval_seed, "test")) if test is not None else None
    history = pd.DataFrame(rows)
    return TrainResult(model, history, train_acc, test_acc)


def evaluate(model: GnnModel, dataset: Dataset, seed: int, runs: int | None = None) -> float:
    """Accuracy in eval mode with dropout active; ``runs`` overrides the run count."""
    batch = GraphBatch.from_graphs(dataset.graphs, port_width=model.port_width)
    keep = sample_keep(model, batch.node_count, seed, runs)
    out = forward_batch(model, batch, keep, Tape("eval"))
    return _accuracy(out.final.value, dataset.labels)


def numerical_gradient(
    f: Callable[[dict[str, np.ndarray]], float],
    params: dict[str, np.ndarray],
    name: str,
    h: float = 1e-4,
) -> np.ndarray:
    """Central differences of ``f`` with respect to ``params[name]``."""
    base = params[name]
    grad = np.zeros_like(base)
    for idx in np.ndindex(base.shape):
        shifted = dict(params)
        for sign in (1.0, -1.0):
            nudged = base.copy()
            nudged[idx] += sign * h
            shifted[name] = nudged
            grad[idx] += sign * f(shifted)
        grad[idx] /= 2.0 * h
    return grad
