"""Hydra/OmegaConf utilities: locating conf/, composing, overriding and saving configs."""

from __future__ import annotations

import importlib.util
from pathlib import Path
from typing import Any

from omegaconf import DictConfig, OmegaConf

from dropgnn.config.schemas import ExperimentConfig
from dropgnn.utils.file_utils import shared_data_candidates


def repo_conf_dir() -> str:
    """Return the conf/ directory, whether running from the repo or installed."""
    candidates = [Path(__file__).parents[2] / "conf"]
    if candidates[0].is_dir():
        return str(candidates[0])
    spec = importlib.util.find_spec("dropgnn")
    if spec and spec.origin:
        # wheel shared-data lands in <prefix>/share/dropgnn/conf
        candidates += shared_data_candidates(Path(spec.origin).parent, "conf")
    for candidate in candidates:
        if candidate.is_dir():
            return str(candidate)
    raise FileNotFoundError(
        "Cannot locate the conf/ directory. Run 'pip install -e .' from the repository root."
    )


def compose_config(overrides: list[str] | None = None, conf_dir: str | None = None) -> DictConfig:
    """Compose ``config.yaml`` with Hydra override strings (``group=option``, ``a.b=v``)."""
    from hydra import compose, initialize_config_dir
    from hydra.core.global_hydra import GlobalHydra

    GlobalHydra.instance().clear()
    with initialize_config_dir(config_dir=conf_dir or repo_conf_dir(), job_name="dropgnn"):
        return compose(config_name="config", overrides=list(overrides or []))


def to_plain(cfg: DictConfig) -> dict[str, Any]:
    return OmegaConf.to_container(cfg, resolve=True)  # type: ignore[return-value]


def experiment_from_cfg(cfg: DictConfig | dict[str, Any]) -> ExperimentConfig:
    """Validate a composed tree. Raises pydantic's ValueError on invalid settings."""
    raw = to_plain(cfg) if isinstance(cfg, DictConfig) else cfg
    return ExperimentConfig.from_dict(raw)


def apply_overrides(cfg: DictConfig, updates: dict[str, Any]) -> DictConfig:
    """Set dotted keys on a copy of ``cfg``; None values are skipped."""
    out = cfg.copy()
    for key, value in updates.items():
        if value is not None:
            OmegaConf.update(out, key, value, force_add=True)
    return out


def save_config(cfg_dict: dict[str, Any] | DictConfig, output_path: str | Path) -> str:
    """Save a config as YAML. Returns the path."""
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cfg = cfg_dict if isinstance(cfg_dict, DictConfig) else OmegaConf.create(cfg_dict)
    path.write_text(OmegaConf.to_yaml(cfg))
    return str(path)


def load_config(config_path: str | Path) -> dict[str, Any]:
    """Load a YAML config file and return it as a plain dict."""
    cfg = OmegaConf.load(config_path)
    return OmegaConf.to_container(cfg, resolve=True)  # type: ignore[return-value]
