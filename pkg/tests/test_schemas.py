"""Tests for the pydantic experiment schemas."""

import pytest
from pydantic import ValidationError

from dropgnn.config.schemas import (
    DatasetConfig,
    ExperimentConfig,
    MethodConfig,
    TrainConfig,
    validate_experiment,
)
from dropgnn.engine.model import Augmentation


def _raw(**sections):
    raw = {
        "dataset": {"family": "limits1"},
        "method": {"name": "dropgin", "dropout": True, "run_count": 50},
    }
    raw.update(sections)
    return raw


class TestTrainConfig:
    def test_defaults(self):
        config = TrainConfig()
        assert config.learning_rate == 0.01
        assert config.aux_loss_weight == pytest.approx(1 / 3)

    def test_rejects_unknown_rule(self):
        with pytest.raises(ValidationError, match="p rule"):
            TrainConfig(p_rule="median")

    def test_rejects_certain_dropout(self):
        with pytest.raises(ValidationError):
            TrainConfig(dropout_p=1.0)


class TestMethodConfig:
    def test_dropgin_needs_dropout(self):
        with pytest.raises(ValidationError, match="dropout"):
            MethodConfig(name="dropgin")

    def test_augmentation_must_match(self):
        with pytest.raises(ValidationError, match="augmentation"):
            MethodConfig(name="gin_ports", augmentation="node_ids")

    def test_combination_needs_flag(self):
        with pytest.raises(ValidationError):
            MethodConfig(name="dropgin", dropout=True, augmentation="ports")
        combined = MethodConfig(name="dropgin", dropout=True, augmentation="ports", combine=True)
        assert combined.augmentation is Augmentation.PORTS

    def test_runs_need_dropout(self):
        with pytest.raises(ValidationError, match="run_count"):
            MethodConfig(name="gin", run_count=5)

    def test_unknown_method(self):
        with pytest.raises(ValidationError, match="Unknown method"):
            MethodConfig(name="ppgn")


class TestDatasetConfig:
    def test_unknown_family(self):
        with pytest.raises(ValidationError, match="Unknown dataset family"):
            DatasetConfig(family="cora")

    def test_acceptance_band(self):
        with pytest.raises(ValidationError, match="acceptance"):
            DatasetConfig(family="limits1", acceptance={"gin": (0.6, 0.4)})


class TestExperimentConfig:
    def test_method_sets_model(self):
        exp = ExperimentConfig.from_dict(_raw())
        assert exp.model.run_count == 50
        assert exp.model.augmentation is Augmentation.NONE
        assert exp.uses_dropout

    def test_train_run_count_override(self):
        exp = ExperimentConfig.from_dict(_raw(train={"run_count": 20}))
        assert exp.model.run_count == 20

    def test_override_ignored_without_dropout(self):
        raw = _raw(method={"name": "gin"}, train={"run_count": 20})
        assert ExperimentConfig.from_dict(raw).model.run_count == 1

    def test_dataset_widths(self):
        raw = _raw(dataset={"family": "skip_circles", "num_layers": 9, "hidden": 32})
        exp = ExperimentConfig.from_dict(raw)
        assert (exp.model.num_layers, exp.model.hidden) == (9, 32)

    def test_unknown_sections_are_ignored(self):
        exp = ExperimentConfig.from_dict(_raw(hydra={"job": {"name": "x"}}))
        assert exp.dataset.family == "limits1"


class TestValidateExperiment:
    def test_valid(self):
        assert validate_experiment(_raw()) == (True, [])

    def test_invalid(self):
        ok, errors = validate_experiment(_raw(model={"hidden": 0}))
        assert not ok
        assert len(errors) == 1
