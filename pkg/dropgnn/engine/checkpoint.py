"""Versioned JSON checkpoints holding architecture, weights and batch-norm statistics."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from dropgnn.engine.model import (
    Activation,
    Aggregation,
    Augmentation,
    DenseSpec,
    DropoutMode,
    GnnModel,
    LayerSpec,
    RunAggregation,
    Task,
)

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "dropgnn.checkpoint"
CHECKPOINT_VERSION = 1


def _dense_to_dict(spec: DenseSpec) -> dict[str, Any]:
    return {
        "name": spec.name,
        "in_dim": spec.in_dim,
        "out_dim": spec.out_dim,
        "activation": spec.activation.value,
        "batch_norm": spec.batch_norm,
    }


def _dense_from_dict(doc: dict[str, Any]) -> DenseSpec:
    return DenseSpec(
        doc["name"], doc["in_dim"], doc["out_dim"], Activation(doc["activation"]), doc["batch_norm"]
    )


def model_to_dict(model: GnnModel) -> dict[str, Any]:
    return {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "name": model.name,
        "in_dim": model.in_dim,
        "aggregation": model.aggregation.value,
        "augmentation": model.augmentation.value,
        "task": model.task.value,
        "num_classes": model.num_classes,
        "run_aggregation": model.run_aggregation.value,
        "run_transform": (
            _dense_to_dict(model.run_transform) if model.run_transform is not None else None
        ),
        "run_count": model.run_count,
        "dropout_p": model.dropout_p,
        "dropout_mode": model.dropout_mode.value,
        "epsilon": model.epsilon,
        "port_width": model.port_width,
        "layers": [
            {
                "name": layer.name,
                "in_dim": layer.in_dim,
                "out_dim": layer.out_dim,
                "self_coef": layer.self_coef,
                "edge_dim": layer.edge_dim,
                "neighbor_mlp": [_dense_to_dict(d) for d in layer.neighbor_mlp],
                "update_mlp": [_dense_to_dict(d) for d in layer.update_mlp],
            }
            for layer in model.layers
        ],
        "params": {k: v.tolist() for k, v in model.params.items()},
        "buffers": {k: v.tolist() for k, v in model.buffers.items()},
    }


def model_from_dict(doc: dict[str, Any]) -> GnnModel:
    if doc.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a dropgnn checkpoint (format={doc.get('format')!r})")
    if doc.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {doc.get('version')}")
    layers = [
        LayerSpec(
            name=d["name"],
            in_dim=d["in_dim"],
            out_dim=d["out_dim"],
            self_coef=d["self_coef"],
            neighbor_mlp=[_dense_from_dict(x) for x in d["neighbor_mlp"]],
            update_mlp=[_dense_from_dict(x) for x in d["update_mlp"]],
            edge_dim=d["edge_dim"],
        )
        for d in doc["layers"]
    ]
    transform = doc.get("run_transform")
    return GnnModel(
        in_dim=doc["in_dim"],
        layers=layers,
        params={k: np.asarray(v, dtype=np.float64) for k, v in doc["params"].items()},
        buffers={k: np.asarray(v, dtype=np.float64) for k, v in doc["buffers"].items()},
        aggregation=Aggregation(doc["aggregation"]),
        augmentation=Augmentation(doc["augmentation"]),
        task=Task(doc["task"]),
        num_classes=doc["num_classes"],
        run_aggregation=RunAggregation(doc["run_aggregation"]),
        run_transform=_dense_from_dict(transform) if transform else None,
        run_count=doc["run_count"],
        dropout_p=doc["dropout_p"],
        dropout_mode=DropoutMode(doc["dropout_mode"]),
        epsilon=doc["epsilon"],
        port_width=doc["port_width"],
        name=doc["name"],
    )


def save_checkpoint(model: GnnModel, path: str | Path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(model_to_dict(model)))
    log.info("Checkpoint saved to %s (%d parameters)", path, model.num_parameters())
    return str(path)


def load_checkpoint(path: str | Path) -> GnnModel:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    return model_from_dict(json.loads(path.read_text()))
