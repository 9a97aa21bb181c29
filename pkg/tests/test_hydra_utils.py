"""Tests for Hydra composition, overrides, config round trips and data directory lookup."""

from pathlib import Path
from unittest.mock import MagicMock

import pytest
from omegaconf import OmegaConf

from dropgnn.config import hydra_utils
from dropgnn.config.hydra_utils import (
    apply_overrides,
    compose_config,
    experiment_from_cfg,
    load_config,
    repo_conf_dir,
    save_config,
    to_plain,
)
from dropgnn.utils import reports
from dropgnn.utils.file_utils import shared_data_candidates
from dropgnn.utils.reports import template_dir


class TestCompose:
    def test_defaults(self):
        cfg = compose_config()
        assert cfg.dataset.family == "limits1"
        assert cfg.method.name == "dropgin"
        assert cfg.train.epochs == 1000

    def test_group_overrides(self):
        cfg = compose_config(["dataset=skip_circles", "method=gin_ports", "model.hidden=8"])
        exp = experiment_from_cfg(cfg)
        assert exp.dataset.family == "skip_circles"
        assert exp.method.augmentation.value == "ports"
        # dataset-level widths win over the model group
        assert exp.model.hidden == 32
        assert exp.model.num_layers == 9

    def test_real_world_training_preset(self):
        exp = experiment_from_cfg(compose_config(["train=real_world"]))
        assert exp.train.p_factor == 2.0
        assert exp.model.run_count == 20

    def test_out_dir_from_environment(self, monkeypatch):
        monkeypatch.setenv("DROPGNN_OUT_DIR", "/tmp/elsewhere")
        assert to_plain(compose_config())["run"]["out_dir"] == "/tmp/elsewhere"

    def test_every_method_validates(self):
        for method in ("gin", "gin_ports", "gin_ids", "gin_random", "dropgin"):
            exp = experiment_from_cfg(compose_config([f"method={method}"]))
            assert exp.uses_dropout == (method == "dropgin")

    def test_conf_dir_exists(self):
        assert repo_conf_dir().endswith("conf")


class TestOverrides:
    def test_dotted_keys_and_none(self):
        cfg = OmegaConf.create({"run": {"seed": 0}})
        out = apply_overrides(cfg, {"run.seed": 4, "run.out_dir": None, "train.epochs": 3})
        assert out.run.seed == 4
        assert "out_dir" not in out.run
        assert out.train.epochs == 3
        assert cfg.run.seed == 0

    def test_invalid_tree(self):
        cfg = compose_config(["train.learning_rate=-1"])
        with pytest.raises(ValueError):
            experiment_from_cfg(cfg)


class TestSaveLoad:
    def test_roundtrip(self, tmp_path):
        cfg = compose_config(["dataset=lcc"])
        path = save_config(cfg, tmp_path / "sub" / "config.yaml")
        loaded = load_config(path)
        assert loaded["dataset"]["family"] == "lcc"
        assert experiment_from_cfg(loaded).dataset.count == 6

    def test_plain_dict(self, tmp_path):
        path = save_config({"a": {"b": 1}}, tmp_path / "c.yaml")
        assert load_config(path) == {"a": {"b": 1}}


class TestDataDirs:
    def test_shared_data_candidates(self):
        site = "/usr/lib/python3/site-packages/dropgnn"
        assert shared_data_candidates(site, "conf") == [
            Path("/usr/lib/share/dropgnn/conf"),
            Path("/usr/share/dropgnn/conf"),
        ]

    def test_shallow_package_has_no_candidates(self):
        assert shared_data_candidates("/dropgnn", "conf") == []
        assert shared_data_candidates("/a/dropgnn", "conf") == []

    def test_repo_dirs_found_first(self, mocker):
        find_spec = mocker.patch("importlib.util.find_spec")
        assert repo_conf_dir().endswith("conf")
        assert template_dir().endswith(str(Path("templates", "reports")))
        find_spec.assert_not_called()

    def test_missing_dirs_in_shallow_install(self, monkeypatch, mocker):
        mocker.patch("importlib.util.find_spec", return_value=MagicMock(origin="/dropgnn/x.py"))
        monkeypatch.setattr(hydra_utils, "__file__", "/dropgnn/config/hydra_utils.py")
        monkeypatch.setattr(reports, "__file__", "/dropgnn/utils/reports.py")
        with pytest.raises(FileNotFoundError, match="conf"):
            repo_conf_dir()
        with pytest.raises(FileNotFoundError, match="templates"):
            template_dir()
