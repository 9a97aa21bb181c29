"""Tests for the loss, the composed DropGIN gradient and the training loop."""

import math

import numpy as np
import pytest

from dropgnn.config.schemas import TrainConfig
from dropgnn.datasets.synthetic import generate
from dropgnn.engine.augment import augment
from dropgnn.engine.forward import GraphBatch, RunOutputs, sample_keep
from dropgnn.engine.model import Task, build_gin
from dropgnn.errors import DivergenceError
from dropgnn.graphs.families import cycle_graph, star_graph
from dropgnn.training.loop import evaluate, numerical_gradient, train, training_step
from dropgnn.training.loss import aux_coefficients, final_coefficients, loss
from dropgnn.training.tape import Tape


def _outputs(tape, rows=3, runs=2, classes=2, present=None):
    present = np.ones((runs, rows), dtype=bool) if present is None else present
    zeros = tape.param("final", np.zeros((rows, classes)))
    per_run = tape.param("per_run", np.zeros((runs * rows, classes)))
    return RunOutputs(present, [], zeros, zeros, per_run, present)


class TestLoss:
    def test_uniform_logits_give_log_two(self):
        tape = Tape()
        parts = loss(tape, _outputs(tape), np.array([0, 1, 1]))
        assert float(parts.total.value) == pytest.approx(math.log(2))
        assert parts.final == pytest.approx(math.log(2))
        assert parts.aux == pytest.approx(math.log(2))

    def test_without_aux(self):
        tape = Tape()
        parts = loss(tape, _outputs(tape), np.array([0, 1, 1]), use_aux=False)
        assert parts.aux == 0.0
        assert float(parts.total.value) == pytest.approx(math.log(2))

    def test_label_shape(self):
        tape = Tape()
        with pytest.raises(ValueError, match="labels"):
            loss(tape, _outputs(tape), np.array([0, 1]))

    def test_final_coefficients(self):
        assert final_coefficients(np.array([1.0, 1.0, 2.0])).tolist() == [0.25, 0.25, 0.5]
        assert final_coefficients(np.zeros(2)).tolist() == [0.0, 0.0]

    def test_aux_coefficients_skip_absent_entries(self):
        present = np.array([[True, False], [True, True]])
        coef = aux_coefficients(present, np.ones(2))
        assert coef.tolist() == [0.5, 0.0, 0.25, 0.25]

    def test_aux_coefficients_skip_empty_runs(self):
        present = np.array([[False, False], [True, True]])
        assert aux_coefficients(present, np.ones(2)).tolist() == [0.0, 0.0, 0.5, 0.5]


class TestComposedGradient:
    @pytest.mark.parametrize(
        "aggregation, task, ports",
        [
            ("sum", Task.GRAPH, False),
            ("mean", Task.GRAPH, False),
            ("max", Task.GRAPH, False),
            ("sum", Task.GRAPH, True),
            ("sum", Task.NODE, False),
            ("mean", Task.NODE, True),
            ("max", Task.NODE, True),
        ],
    )
    def test_dropgin_gradients_match_finite_differences(self, aggregation, task, ports):
        rng = np.random.default_rng(3)
        graphs = [
            cycle_graph(5).with_features(rng.standard_normal((5, 2))),
            star_graph(3).with_features(rng.standard_normal((4, 2))),
        ]
        if ports:
            graphs = [augment(g, "ports", seed=i) for i, g in enumerate(graphs)]
        batch = GraphBatch.from_graphs(graphs)
        labels = np.array([0, 1]) if task is Task.GRAPH else rng.integers(0, 2, size=9)
        model = build_gin(
            2,
            3,
            2,
            2,
            task,
            aggregation=aggregation,
            augmentation="ports" if ports else "none",
            port_width=3 if ports else 0,
            run_count=3,
            dropout_p=0.2,
            seed=5,
        )
        keep = sample_keep(model, batch.node_count, seed=11)

        def f(params):
            copy = model.copy()
            copy.params = params
            return training_step(copy, batch, labels, keep, 1.0 / 3.0)[0]

        _, grads, info = training_step(model, batch, labels, keep, 1.0 / 3.0)
        assert info["aux_loss"] > 0.0
        for name in model.params:
            numeric = numerical_gradient(f, dict(model.params), name)
            denom = max(np.linalg.norm(numeric), np.linalg.norm(grads[name]), 1e-6)
            assert np.linalg.norm(grads[name] - numeric) / denom <= 1e-3, name

    def test_plain_gin_skips_aux_loss(self):
        batch = GraphBatch.from_graphs([cycle_graph(4)])
        model = build_gin(1, 3, 1, 2)
        keep = sample_keep(model, batch.node_count, seed=0)
        _, grads, info = training_step(model, batch, np.array([1]), keep, 1.0 / 3.0)
        assert info["aux_loss"] == 0.0
        assert np.all(grads["aux_head.weight"] == 0.0)


class TestTrainLoop:
    def test_learning_rate_schedule(self):
        config = TrainConfig()
        assert config.learning_rate_at(0) == 0.01
        assert config.learning_rate_at(50) == pytest.approx(0.005)
        assert config.learning_rate_at(149) == pytest.approx(0.0025)

    def test_history_and_buffers(self):
        dataset = generate("limits1", seed=0)
        model = build_gin(1, 4, 2, 2, Task.NODE, run_count=4, dropout_p=1 / 16, seed=0)
        before = model.buffers["layers.0.mlp.0.bn.running_var"].copy()
        result = train(model, dataset, TrainConfig(epochs=3, log_every=1, seed=2))
        assert list(result.history.columns) == [
            "epoch", "lr", "loss", "final_loss", "aux_loss", "train_acc"
        ]
        assert len(result.history) == 3
        assert result.test_acc is None
        assert result.to_dict()["epochs"] == 3
        assert not np.array_equal(model.buffers["layers.0.mlp.0.bn.running_var"], before)

    def test_gin_cannot_split_wl_equivalent_nodes(self):
        dataset = generate("limits1", seed=0)
        model = build_gin(1, 4, 2, 2, Task.NODE, seed=0)
        result = train(model, dataset, TrainConfig(epochs=3, seed=0))
        assert result.train_acc == 0.5

    def test_divergence(self, mocker):
        mocker.patch(
            "dropgnn.training.loop.training_step", return_value=(float("nan"), {}, {})
        )
        dataset = generate("limits1", seed=0)
        model = build_gin(1, 4, 1, 2, Task.NODE)
        with pytest.raises(DivergenceError) as excinfo:
            train(model, dataset, TrainConfig(epochs=5))
        assert excinfo.value.epoch == 0
        assert excinfo.value.last_finite_loss is None

    def test_empty_dataset(self):
        dataset = generate("limits1", seed=0)
        dataset.graphs = []
        with pytest.raises(ValueError, match="empty"):
            train(build_gin(1, 4, 1, 2, Task.NODE), dataset, TrainConfig(epochs=1))

    def test_evaluate_is_seeded(self):
        dataset = generate("limits1", seed=0)
        model = build_gin(1, 4, 2, 2, Task.NODE, run_count=8, dropout_p=1 / 16)
        assert evaluate(model, dataset, seed=4) == evaluate(model, dataset, seed=4)


@pytest.mark.slow
class TestAcceptance:
    @pytest.mark.parametrize("family", ["limits1", "limits2"])
    def test_dropgin_separates_limits(self, family):
        dataset = generate(family, seed=0)
        model = build_gin(1, 16, 4, 2, Task.NODE, run_count=50, dropout_p=1 / 16, seed=0)
        result = train(model, dataset, TrainConfig(epochs=300, seed=0), dataset)
        assert result.train_acc >= 0.98
