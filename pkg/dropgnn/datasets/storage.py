"""Dataset directories: one JSON file per graph, labels.csv and meta.json."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from dropgnn.datasets.synthetic import Dataset
from dropgnn.engine.model import Task
from dropgnn.graphs.io import load_graph, save_graph
from dropgnn.utils.tables import read_csv, write_csv

log = logging.getLogger(__name__)

DATASET_FORMAT = "dropgnn.dataset"
DATASET_VERSION = 1


def save_dataset(dataset: Dataset, directory: str | Path) -> str:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for i, g in enumerate(dataset.graphs):
        save_graph(g, directory / f"graph_{i:04d}.json")

    if dataset.task is Task.NODE:
        graph_col = np.repeat(np.arange(len(dataset.graphs)), dataset.node_counts)
        node_col = np.concatenate([np.arange(n) for n in dataset.node_counts])
        frame = pd.DataFrame({"graph": graph_col, "node": node_col, "label": dataset.labels})
    else:
        frame = pd.DataFrame({"graph": np.arange(len(dataset.graphs)), "label": dataset.labels})
    write_csv(frame, directory / "labels.csv", "labels")

    meta = {
        "format": DATASET_FORMAT,
        "version": DATASET_VERSION,
        "family": dataset.name,
        "seed": dataset.seed,
        "task": dataset.task.value,
        "num_classes": dataset.num_classes,
        "graph_count": len(dataset.graphs),
        "params": dataset.params,
        "meta": dataset.meta,
    }
    (directory / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True))
    log.info("Saved %s dataset (%d graphs) to %s", dataset.name, len(dataset.graphs), directory)
    return str(directory)


def load_dataset(directory: str | Path) -> Dataset:
    directory = Path(directory)
    meta_path = directory / "meta.json"
    if not meta_path.exists():
        raise FileNotFoundError(f"No meta.json in dataset directory {directory}")
    meta = json.loads(meta_path.read_text())
    if meta.get("format") != DATASET_FORMAT or meta.get("version") != DATASET_VERSION:
        raise ValueError(
            f"{meta_path}: unsupported dataset format {meta.get('format')!r} "
            f"version {meta.get('version')!r}"
        )
    graphs = [load_graph(directory / f"graph_{i:04d}.json") for i in range(meta["graph_count"])]
    labels = read_csv(directory / "labels.csv", kind="labels")
    sort_keys = ["graph", "node"] if "node" in labels.columns else ["graph"]
    labels = labels.sort_values(sort_keys)
    return Dataset(
        name=meta["family"],
        graphs=graphs,
        labels=labels["label"].to_numpy(),
        task=Task(meta["task"]),
        num_classes=meta["num_classes"],
        seed=meta["seed"],
        params=meta.get("params", {}),
        meta=meta.get("meta", {}),
    )
