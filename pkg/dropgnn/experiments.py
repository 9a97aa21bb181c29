"""Experiment drivers: accuracy grid, run-count sweep and dropout-probability sweep."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.stats import spearmanr

from dropgnn.config.schemas import ExperimentConfig
from dropgnn.datasets.synthetic import Dataset, generate, make_test_copy
from dropgnn.dropout.probability import dataset_dropout_p
from dropgnn.dropout.sampling import derive_seed
from dropgnn.engine.augment import augment_all, max_degree
from dropgnn.engine.model import Augmentation, GnnModel, build_gin, gin_input_dim
from dropgnn.training.loop import TrainResult, evaluate, train
from dropgnn.utils.tables import write_csv

log = logging.getLogger(__name__)

P_GRID = (0.0, 0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64, 0.95)
R_GRID = (1, 2, 5, 10, 20, 50)


@dataclass
class Prepared:
    model: GnnModel
    train_set: Dataset
    test_set: Dataset
    dropout_p: float


def default_dropout_p(config: ExperimentConfig, dataset: Dataset) -> float:
    """Configured p, else factor/m for dropout methods; 0 for the others."""
    if not config.uses_dropout:
        return 0.0
    if config.train.dropout_p is not None:
        return config.train.dropout_p
    return dataset_dropout_p(dataset.node_counts, config.train.p_factor, config.train.p_rule)


def augment_dataset(
    dataset: Dataset, kind: Augmentation, seed: int, id_width: int | None = None
) -> Dataset:
    if kind is Augmentation.NONE:
        return dataset
    return dataset.with_graphs(augment_all(dataset.graphs, kind, seed, id_width))


def augment_for(model: GnnModel, dataset: Dataset, seed: int) -> Dataset:
    """Apply a trained model's augmentation to a dataset it has not seen."""
    id_width = None
    if model.augmentation is Augmentation.NODE_IDS:
        id_width = model.in_dim - dataset.graphs[0].feature_dim
    return augment_dataset(dataset, model.augmentation, seed, id_width)


def prepare(
    config: ExperimentConfig, seed: int, dataset: Dataset | None = None
) -> Prepared:
    """Generate (or take) the training set, its test copy, and a fresh model for ``seed``."""
    if dataset is None:
        dataset = generate(config.dataset.family, seed, config.dataset.count)
    test = make_test_copy(dataset)
    mc = config.model
    p = default_dropout_p(config, dataset)

    every = dataset.graphs + test.graphs
    id_width = max(g.node_count for g in every) if mc.augmentation is Augmentation.NODE_IDS else 0
    port_width = max_degree(every) if mc.augmentation is Augmentation.PORTS else 0
    width = id_width or None
    train_set = augment_dataset(
        dataset, mc.augmentation, derive_seed(seed, "augment", "train"), width
    )
    test_set = augment_dataset(test, mc.augmentation, derive_seed(seed, "augment", "test"), width)

    model = build_gin(
        gin_input_dim(dataset.graphs[0].feature_dim, mc.augmentation, id_width),
        mc.hidden,
        mc.num_layers,
        dataset.num_classes,
        dataset.task,
        aggregation=mc.aggregation,
        augmentation=mc.augmentation,
        epsilon=mc.epsilon,
        batch_norm=mc.batch_norm,
        run_count=mc.run_count,
        dropout_p=p,
        dropout_mode=mc.dropout_mode,
        port_width=port_width,
        seed=derive_seed(seed, "init"),
        name=config.method.name,
    )
    return Prepared(model, train_set, test_set, p)


def run_experiment(config: ExperimentConfig, seed: int) -> TrainResult:
    prepared = prepare(config, seed)
    train_config = config.train.model_copy(update={"seed": seed})
    return train(prepared.model, prepared.train_set, train_config, prepared.test_set)


def _run_row(args: tuple[ExperimentConfig, int]) -> dict:
    config, seed = args
    result = run_experiment(config, seed)
    return {
        "dataset": config.dataset.family,
        "method": config.method.name,
        "seed": seed,
        "train_acc": result.train_acc,
        "test_acc": result.test_acc,
        "final_loss": result.to_dict()["final_loss"],
    }


def _map(fn, items: list, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def seed_list(config: ExperimentConfig) -> list[int]:
    return [config.run.seed + i for i in range(config.run.seeds)]


# ── Accuracy grid ─────────────────────────────────────────────────────


def table1(
    configs: Sequence[ExperimentConfig], out_dir: str | Path | None = None, jobs: int = 1
) -> tuple[pd.DataFrame, pd.DataFrame]:
    """Train every (dataset, method) cell over its seeds.

    Returns the per-seed frame and the summary (mean and std over seeds). With
    ``out_dir``, per-seed rows finished so far are written even when a run fails.
    """
    rows: list[dict] = []
    try:
        for config in configs:
            log.info("Grid cell: %s / %s", config.dataset.family, config.method.name)
            rows.extend(_map(_run_row, [(config, s) for s in seed_list(config)], jobs))
    finally:
        if out_dir is not None and rows:
            write_csv(pd.DataFrame(rows), Path(out_dir) / "table1_runs.csv", "table1_runs")
    runs = pd.DataFrame(rows)
    return runs, summarize(runs, configs)


def summarize(runs: pd.DataFrame, configs: Sequence[ExperimentConfig]) -> pd.DataFrame:
    bands = {
        (c.dataset.family, c.method.name): c.dataset.acceptance.get(c.method.name)
        for c in configs
    }
    summary = (
        runs.groupby(["dataset", "method"], sort=False)
        .agg(
            train_mean=("train_acc", "mean"),
            train_std=("train_acc", lambda s: float(np.std(s))),
            test_mean=("test_acc", "mean"),
            test_std=("test_acc", lambda s: float(np.std(s))),
            seeds=("seed", "count"),
        )
        .reset_index()
    )
    low, high, passed = [], [], []
    for _, row in summary.iterrows():
        band = bands.get((row["dataset"], row["method"]))
        low.append(band[0] if band else math.nan)
        high.append(band[1] if band else math.nan)
        passed.append(band is None or band[0] <= row["test_mean"] <= band[1])
    summary["accept_low"], summary["accept_high"], summary["passed"] = low, high, passed
    return summary


def acceptance_failures(summary: pd.DataFrame) -> list[str]:
    return [
        f"{r.dataset}/{r.method}: test {r.test_mean:.3f} outside [{r.accept_low}, {r.accept_high}]"
        for r in summary.itertuples()
        if not r.passed
    ]


# ── Sweeps ────────────────────────────────────────────────────────────


@dataclass
class SweepResult:
    frame: pd.DataFrame
    reference: float | None
    trend: float
    failures: list[str]


def sweep_runs(
    config: ExperimentConfig, r_values: Sequence[int] = R_GRID, tests: int | None = None
) -> SweepResult:
    """Train at the configured r, then evaluate the same models with fewer or more runs."""
    tests = tests or config.run.tests
    scores: dict[int, list[float]] = {r: [] for r in r_values}
    for seed in seed_list(config):
        prepared = prepare(config, seed)
        train_config = config.train.model_copy(update={"seed": seed})
        result = train(prepared.model, prepared.train_set, train_config)
        for r in r_values:
            for t in range(tests):
                eval_seed = derive_seed(seed, "sweep", r, t)
                scores[r].append(evaluate(result.model, prepared.test_set, eval_seed, r))
        log.info("sweep-runs seed %d done", seed)

    frame = pd.DataFrame(
        {
            "runs": list(r_values),
            "test_acc_mean": [float(np.mean(scores[r])) for r in r_values],
            "test_acc_std": [float(np.std(scores[r])) for r in r_values],
            "evaluations": [len(scores[r]) for r in r_values],
        }
    )
    trend = _trend(frame["runs"], frame["test_acc_mean"])
    failures = [] if trend > 0 or math.isnan(trend) else [f"Spearman rho {trend:.3f} <= 0"]
    return SweepResult(frame, None, trend, failures)


def sweep_p(config: ExperimentConfig, p_values: Sequence[float] = P_GRID) -> SweepResult:
    """Train and test DropGIN once per dropout probability."""
    seeds = seed_list(config)
    counts = [generate(config.dataset.family, s, config.dataset.count).node_counts for s in seeds]
    rule = (config.train.p_factor, config.train.p_rule)
    reference = float(np.mean([dataset_dropout_p(c, *rule) for c in counts]))
    rows = []
    for p in p_values:
        cfg = config.model_copy(update={"train": config.train.model_copy(update={"dropout_p": p})})
        accs = []
        for seed in seeds:
            result = run_experiment(cfg, seed)
            accs.append((result.train_acc, result.test_acc))
        train_accs, test_accs = zip(*accs)
        rows.append(
            {
                "p": p,
                "train_acc_mean": float(np.mean(train_accs)),
                "test_acc_mean": float(np.mean(test_accs)),
                "test_acc_std": float(np.std(test_accs)),
            }
        )
        log.info("sweep-p p=%.2f: test %.3f", p, rows[-1]["test_acc_mean"])

    frame = pd.DataFrame(rows)
    failures = []
    if len(frame) > 1:
        nearest = frame.iloc[(frame["p"] - reference).abs().argmin()]
        largest = frame.iloc[frame["p"].argmax()]
        if largest["p"] > nearest["p"] and largest["test_acc_mean"] >= nearest["test_acc_mean"]:
            failures.append(
                f"p={largest['p']:.2f} is not worse than p={nearest['p']:.2f} near 1/m"
            )
    return SweepResult(frame, reference, _trend(frame["p"], frame["test_acc_mean"]), failures)


def _trend(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation; NaN when either side is constant."""
    if len(set(x)) < 2 or len(set(y)) < 2:
        return math.nan
    rho, _ = spearmanr(x, y)
    return float(rho)
