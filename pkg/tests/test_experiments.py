"""Tests for experiment preparation, the accuracy grid and the sensitivity sweeps."""

import math
from unittest.mock import MagicMock

import pandas as pd
import pytest

from dropgnn.config.schemas import ExperimentConfig
from dropgnn.datasets.synthetic import generate
from dropgnn.engine.model import Augmentation
from dropgnn.experiments import (
    acceptance_failures,
    augment_for,
    default_dropout_p,
    prepare,
    run_experiment,
    summarize,
    sweep_p,
    sweep_runs,
    table1,
)
from dropgnn.utils.tables import read_csv

METHODS = {
    "gin": {"name": "gin"},
    "gin_ports": {"name": "gin_ports", "augmentation": "ports"},
    "gin_ids": {"name": "gin_ids", "augmentation": "node_ids"},
    "dropgin": {"name": "dropgin", "dropout": True, "run_count": 4},
}


def _config(method="dropgin", family="limits1", **train):
    return ExperimentConfig.from_dict(
        {
            "dataset": {"family": family, "acceptance": {"gin": (0.48, 0.52)}},
            "method": METHODS[method],
            "model": {"hidden": 4, "num_layers": 2},
            "train": {"epochs": 2, "log_every": 1, **train},
            "run": {"seeds": 2},
        }
    )


def _fake_result(train_acc, test_acc, loss=0.5):
    result = MagicMock(train_acc=train_acc, test_acc=test_acc)
    result.to_dict.return_value = {"final_loss": loss}
    return result


class TestPrepare:
    def test_dropout_probability(self):
        ds = generate("limits1", seed=0)
        assert default_dropout_p(_config(), ds) == pytest.approx(1 / 16)
        assert default_dropout_p(_config("gin"), ds) == 0.0
        assert default_dropout_p(_config(dropout_p=0.3), ds) == 0.3
        assert default_dropout_p(_config(p_factor=2.0), ds) == pytest.approx(1 / 8)

    def test_dropgin_model(self):
        prepared = prepare(_config(), seed=0)
        assert prepared.model.run_count == 4
        assert prepared.model.dropout_p == pytest.approx(1 / 16)
        assert prepared.test_set.seed != prepared.train_set.seed

    def test_node_ids_share_width(self):
        prepared = prepare(_config("gin_ids"), seed=0)
        assert prepared.model.in_dim == 1 + 16
        assert {g.feature_dim for g in prepared.train_set.graphs + prepared.test_set.graphs} == {17}

    def test_ports(self):
        prepared = prepare(_config("gin_ports"), seed=0)
        assert prepared.model.port_width == 2
        assert all(g.ports is not None for g in prepared.train_set.graphs)

    def test_augment_for_reuses_width(self):
        prepared = prepare(_config("gin_ids"), seed=0)
        fresh = augment_for(prepared.model, generate("limits1", seed=5), seed=1)
        assert fresh.graphs[0].feature_dim == prepared.model.in_dim
        plain = generate("limits1", seed=5)
        assert augment_for(prepare(_config(), seed=0).model, plain, seed=1) is plain

    def test_run_experiment(self):
        result = run_experiment(_config("gin"), seed=0)
        assert len(result.history) == 2
        assert result.test_acc == 0.5


class TestTable1:
    def test_grid(self, tmp_path, mocker):
        mocker.patch(
            "dropgnn.experiments.run_experiment",
            side_effect=[_fake_result(0.5, 0.5), _fake_result(0.5, 0.5)]
            + [_fake_result(1.0, 1.0), _fake_result(1.0, 0.9)],
        )
        runs, summary = table1([_config("gin"), _config("dropgin")], out_dir=tmp_path)
        assert len(runs) == 4
        assert summary["method"].tolist() == ["gin", "dropgin"]
        assert summary["test_mean"].tolist() == pytest.approx([0.5, 0.95])
        assert summary["test_std"].tolist() == pytest.approx([0.0, 0.05])
        assert summary["passed"].tolist() == [True, True]
        assert math.isnan(summary["accept_low"].iloc[1])
        assert len(read_csv(tmp_path / "table1_runs.csv", kind="table1_runs")) == 4

    def test_partial_rows_survive_failure(self, tmp_path, mocker):
        mocker.patch(
            "dropgnn.experiments.run_experiment",
            side_effect=[_fake_result(0.5, 0.5), RuntimeError("boom")],
        )
        with pytest.raises(RuntimeError):
            table1([_config("gin")], out_dir=tmp_path)
        assert len(read_csv(tmp_path / "table1_runs.csv")) == 1

    def test_acceptance_failures(self):
        runs = pd.DataFrame(
            {
                "dataset": "limits1",
                "method": "gin",
                "seed": [0, 1],
                "train_acc": 1.0,
                "test_acc": [0.9, 0.7],
            }
        )
        summary = summarize(runs, [_config("gin")])
        failures = acceptance_failures(summary)
        assert failures == ["limits1/gin: test 0.800 outside [0.48, 0.52]"]


class TestSweeps:
    def _patch_training(self, mocker, accuracy):
        mocker.patch("dropgnn.experiments.prepare", return_value=MagicMock())
        mocker.patch("dropgnn.experiments.train", return_value=MagicMock())
        mocker.patch(
            "dropgnn.experiments.evaluate",
            side_effect=lambda model, dataset, seed, runs: accuracy(runs),
        )

    def test_runs_sweep_rising(self, mocker):
        self._patch_training(mocker, lambda r: min(1.0, 0.5 + r / 100))
        result = sweep_runs(_config(), r_values=(1, 5, 20), tests=2)
        assert result.frame["evaluations"].tolist() == [4, 4, 4]
        assert result.trend == pytest.approx(1.0)
        assert result.failures == []

    def test_runs_sweep_falling(self, mocker):
        self._patch_training(mocker, lambda r: 1.0 - r / 100)
        result = sweep_runs(_config(), r_values=(1, 5, 20), tests=1)
        assert result.failures

    def test_runs_sweep_flat_is_inconclusive(self, mocker):
        self._patch_training(mocker, lambda r: 0.5)
        result = sweep_runs(_config(), r_values=(1, 5), tests=1)
        assert math.isnan(result.trend)
        assert result.failures == []

    def test_p_sweep(self, mocker):
        accuracy = {0.0: 0.5, 0.04: 0.9, 0.08: 1.0, 0.64: 0.6}
        mocker.patch(
            "dropgnn.experiments.run_experiment",
            side_effect=lambda cfg, seed: _fake_result(1.0, accuracy[cfg.train.dropout_p]),
        )
        result = sweep_p(_config(), p_values=tuple(accuracy))
        assert result.reference == pytest.approx(1 / 16)
        assert result.frame["test_acc_mean"].tolist() == [0.5, 0.9, 1.0, 0.6]
        assert result.failures == []

    def test_p_sweep_reference_averages_seeds(self, mocker):
        mocker.patch(
            "dropgnn.experiments.generate",
            side_effect=[MagicMock(node_counts=[16]), MagicMock(node_counts=[8])],
        )
        mocker.patch(
            "dropgnn.experiments.run_experiment",
            side_effect=lambda cfg, seed: _fake_result(1.0, 1.0 - cfg.train.dropout_p),
        )
        result = sweep_p(_config(), p_values=(0.05, 0.1, 0.5))
        assert result.reference == pytest.approx((1 / 16 + 1 / 8) / 2)
        assert result.failures == []

    def test_p_sweep_flags_flat_tail(self, mocker):
        mocker.patch(
            "dropgnn.experiments.run_experiment",
            side_effect=lambda cfg, seed: _fake_result(1.0, 1.0),
        )
        result = sweep_p(_config(), p_values=(0.0, 0.08, 0.64))
        assert len(result.failures) == 1


class TestAugmentation:
    def test_method_augmentations(self):
        assert _config("gin_ports").model.augmentation is Augmentation.PORTS
        assert _config("dropgin").model.augmentation is Augmentation.NONE
