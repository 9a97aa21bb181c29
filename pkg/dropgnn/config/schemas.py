"""Pydantic schemas for validating composed Hydra configs."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from dropgnn.datasets.synthetic import GENERATORS
from dropgnn.engine.model import Aggregation, Augmentation, DropoutMode
from dropgnn.training.optim import step_decay

P_RULES = {"mean", "max"}

# ── Training ───────────────────────────────────────────────────────────


class TrainConfig(BaseModel):
    learning_rate: float = Field(default=0.01, gt=0)
    decay_factor: float = Field(default=0.5, gt=0, le=1, description="step decay multiplier")
    decay_every: int = Field(default=50, gt=0, description="epochs between decays")
    epochs: int = Field(default=1000, ge=1)
    aux_loss_weight: float = Field(default=1.0 / 3.0, ge=0, le=1)
    log_every: int = Field(default=100, ge=1)
    run_count: int | None = Field(default=None, ge=1, description="overrides the method's r")
    dropout_p: float | None = Field(default=None, ge=0, lt=1, description="null: factor/m")
    p_factor: float = Field(default=1.0, gt=0)
    p_rule: str = "mean"
    seed: int = 0

    @field_validator("p_rule")
    @classmethod
    def validate_p_rule(cls, v: str) -> str:
        if v not in P_RULES:
            raise ValueError(f"Unknown p rule '{v}'. Expected one of {sorted(P_RULES)}")
        return v

    def learning_rate_at(self, epoch: int) -> float:
        return step_decay(self.learning_rate, epoch, self.decay_factor, self.decay_every)


# ── Model ──────────────────────────────────────────────────────────────


class ModelConfig(BaseModel):
    hidden: int = Field(default=16, gt=0)
    num_layers: int = Field(default=4, ge=1)
    aggregation: Aggregation = Aggregation.SUM
    augmentation: Augmentation = Augmentation.NONE
    epsilon: float = 0.0
    batch_norm: bool = True
    run_count: int = Field(default=1, ge=1)
    dropout_mode: DropoutMode = DropoutMode.ZERO_FEATURES


# ── Methods ────────────────────────────────────────────────────────────

METHOD_AUGMENTATION = {
    "gin": Augmentation.NONE,
    "gin_ports": Augmentation.PORTS,
    "gin_ids": Augmentation.NODE_IDS,
    "gin_random": Augmentation.RANDOM_FEATURES,
    "dropgin": Augmentation.NONE,
}


class MethodConfig(BaseModel):
    name: str
    augmentation: Augmentation = Augmentation.NONE
    dropout: bool = False
    run_count: int = Field(default=1, ge=1)
    combine: bool = Field(default=False, description="allow dropout on top of an augmentation")

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if v not in METHOD_AUGMENTATION:
            raise ValueError(f"Unknown method '{v}'. Expected one of {sorted(METHOD_AUGMENTATION)}")
        return v

    @model_validator(mode="after")
    def check_consistency(self) -> MethodConfig:
        expected = METHOD_AUGMENTATION[self.name]
        if self.name == "dropgin":
            if not self.dropout:
                raise ValueError("method 'dropgin' requires dropout: true")
            if self.augmentation is not Augmentation.NONE and not self.combine:
                raise ValueError("dropgin excludes augmentations unless combine: true")
        elif self.augmentation is not expected:
            raise ValueError(
                f"method '{self.name}' uses augmentation '{expected.value}', "
                f"got '{self.augmentation.value}'"
            )
        elif self.dropout and not self.combine:
            raise ValueError(f"method '{self.name}' runs without dropout unless combine: true")
        if not self.dropout and self.run_count != 1:
            raise ValueError("run_count > 1 needs dropout: true")
        return self


# ── Datasets ───────────────────────────────────────────────────────────

FAMILIES = frozenset(GENERATORS)


class DatasetConfig(BaseModel):
    family: str
    count: int | None = Field(default=None, ge=2, description="graph count for random families")
    num_layers: int | None = Field(default=None, ge=1)
    hidden: int | None = Field(default=None, gt=0)
    acceptance: dict[str, tuple[float, float]] = Field(default_factory=dict)

    @field_validator("family")
    @classmethod
    def validate_family(cls, v: str) -> str:
        if v not in FAMILIES:
            raise ValueError(f"Unknown dataset family '{v}'. Expected one of {sorted(FAMILIES)}")
        return v

    @field_validator("acceptance")
    @classmethod
    def validate_acceptance(cls, v: dict[str, tuple[float, float]]) -> dict:
        for method, (low, high) in v.items():
            if not 0.0 <= low <= high <= 1.0:
                raise ValueError(f"acceptance band for '{method}' must satisfy 0<=low<=high<=1")
        return v


# ── Experiment ─────────────────────────────────────────────────────────


class RunSettings(BaseModel):
    out_dir: str = "outputs"
    seed: int = 0
    seeds: int = Field(default=10, ge=1)
    tests: int = Field(default=10, ge=1, description="evaluation repeats in the runs sweep")
    jobs: int = Field(default=1, ge=1)


class ExperimentConfig(BaseModel):
    dataset: DatasetConfig
    method: MethodConfig
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    run: RunSettings = Field(default_factory=RunSettings)

    @model_validator(mode="after")
    def apply_overrides(self) -> ExperimentConfig:
        updates: dict[str, Any] = {"augmentation": self.method.augmentation}
        if self.dataset.num_layers is not None:
            updates["num_layers"] = self.dataset.num_layers
        if self.dataset.hidden is not None:
            updates["hidden"] = self.dataset.hidden
        runs = self.method.run_count
        if self.method.dropout and self.train.run_count is not None:
            runs = self.train.run_count
        updates["run_count"] = runs
        self.model = self.model.model_copy(update=updates)
        return self

    @property
    def uses_dropout(self) -> bool:
        return self.method.dropout

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> ExperimentConfig:
        """Build from a resolved config tree, ignoring keys the schema does not know."""
        keys = ("dataset", "method", "model", "train", "run")
        return cls(**{k: raw[k] for k in keys if k in raw})


def validate_experiment(raw: dict[str, Any]) -> tuple[bool, list[str]]:
    """Validate a resolved config dict. Returns (is_valid, error_messages)."""
    errors: list[str] = []
    try:
        ExperimentConfig.from_dict(raw)
    except Exception as exc:
        errors = [str(exc)]
    return len(errors) == 0, errors
