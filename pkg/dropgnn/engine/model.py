"""Model container: layer specs, parameters, batch-norm buffers and GIN construction."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from dropgnn.errors import DimensionMismatchError


class Aggregation(str, Enum):
    SUM = "sum"
    MEAN = "mean"
    MAX = "max"


class Augmentation(str, Enum):
    NONE = "none"
    PORTS = "ports"
    NODE_IDS = "node_ids"
    RANDOM_FEATURES = "random_features"


class Activation(str, Enum):
    IDENTITY = "identity"
    RELU = "relu"
    STEP = "step"
    STRICT_STEP = "strict_step"


class RunAggregation(str, Enum):
    MEAN = "mean"
    SUM = "sum"
    TRANSFORMED_SUM = "transformed_sum"


class DropoutMode(str, Enum):
    ZERO_FEATURES = "zero_features"
    ZERO_EVERY_LAYER = "zero_every_layer"
    REMOVE_NODES = "remove_nodes"


class Task(str, Enum):
    NODE = "node"
    GRAPH = "graph"
    EMBEDDING = "embedding"


@dataclass
class DenseSpec:
    """Affine map, optional batch norm, activation. Parameters live under ``name``."""

    name: str
    in_dim: int
    out_dim: int
    activation: Activation = Activation.RELU
    batch_norm: bool = False


@dataclass
class LayerSpec:
    """One message-passing round: ``update(self_coef * h + neighbor_mlp(AGG(messages)))``."""

    name: str
    in_dim: int
    out_dim: int
    self_coef: float = 1.0
    neighbor_mlp: list[DenseSpec] = field(default_factory=list)
    update_mlp: list[DenseSpec] = field(default_factory=list)
    edge_dim: int = 0


@dataclass
class GnnModel:
    in_dim: int
    layers: list[LayerSpec]
    params: dict[str, np.ndarray] = field(default_factory=dict)
    buffers: dict[str, np.ndarray] = field(default_factory=dict)
    aggregation: Aggregation = Aggregation.SUM
    augmentation: Augmentation = Augmentation.NONE
    task: Task = Task.GRAPH
    num_classes: int | None = None
    run_aggregation: RunAggregation = RunAggregation.MEAN
    run_transform: DenseSpec | None = None
    run_count: int = 1
    dropout_p: float = 0.0
    dropout_mode: DropoutMode = DropoutMode.ZERO_FEATURES
    epsilon: float = 0.0
    port_width: int = 0
    name: str = "gin"

    def __post_init__(self) -> None:
        self.validate()

    # ── Structure ─────────────────────────────────────────────────────

    @property
    def uses_dropout(self) -> bool:
        return self.run_count > 1 or self.dropout_p > 0.0

    @property
    def output_dim(self) -> int:
        return self.layers[-1].out_dim if self.layers else self.in_dim

    @property
    def readout_dim(self) -> int:
        """Width of the concatenated per-layer embeddings fed to the head."""
        return self.in_dim + sum(layer.out_dim for layer in self.layers)

    def dense_specs(self) -> list[DenseSpec]:
        specs = [d for layer in self.layers for d in (*layer.neighbor_mlp, *layer.update_mlp)]
        if self.run_transform is not None:
            specs.append(self.run_transform)
        return specs

    def validate(self) -> None:
        width = self.in_dim
        for layer in self.layers:
            if layer.in_dim != width:
                raise DimensionMismatchError(
                    f"{layer.name} expects input width {layer.in_dim}, previous layer gives {width}"
                )
            inner = width
            for dense in layer.neighbor_mlp:
                if dense.in_dim != inner:
                    raise DimensionMismatchError(f"{dense.name}: input {dense.in_dim} != {inner}")
                inner = dense.out_dim
            if inner != width:
                raise DimensionMismatchError(
                    f"{layer.name}: neighbor MLP maps {width} -> {inner}, must preserve width"
                )
            for dense in layer.update_mlp:
                if dense.in_dim != inner:
                    raise DimensionMismatchError(f"{dense.name}: input {dense.in_dim} != {inner}")
                inner = dense.out_dim
            if inner != layer.out_dim:
                raise DimensionMismatchError(
                    f"{layer.name}: update MLP ends at width {inner}, "
                    f"layer declares {layer.out_dim}"
                )
            width = layer.out_dim
        if self.run_transform is not None and self.run_transform.in_dim != width:
            raise DimensionMismatchError(
                f"run transform expects width {self.run_transform.in_dim}, model outputs {width}"
            )
        if self.task is not Task.EMBEDDING and not self.num_classes:
            raise DimensionMismatchError(f"{self.task.value} task needs num_classes")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError(f"dropout_p must lie in [0, 1), got {self.dropout_p}")
        if self.run_count < 1:
            raise ValueError(f"run_count must be >= 1, got {self.run_count}")

    # ── State ─────────────────────────────────────────────────────────

    def commit(self, buffer_updates: dict[str, np.ndarray]) -> None:
        """Apply running-statistic updates staged by a training forward pass."""
        for name, value in buffer_updates.items():
            if name not in self.buffers:
                raise KeyError(f"unknown buffer '{name}'")
            self.buffers[name] = value

    def copy(self) -> GnnModel:
        return copy.deepcopy(self)

    def num_parameters(self) -> int:
        return int(sum(v.size for v in self.params.values()))


# ── Initialization ────────────────────────────────────────────────────


def init_dense(spec: DenseSpec, rng: np.random.Generator) -> dict[str, np.ndarray]:
    """Uniform fan-in initialization in [-1/sqrt(fan_in), 1/sqrt(fan_in)]."""
    bound = 1.0 / np.sqrt(spec.in_dim)
    params = {
        f"{spec.name}.weight": rng.uniform(-bound, bound, size=(spec.in_dim, spec.out_dim)),
        f"{spec.name}.bias": rng.uniform(-bound, bound, size=spec.out_dim),
    }
    if spec.batch_norm:
        params[f"{spec.name}.bn.weight"] = np.ones(spec.out_dim)
        params[f"{spec.name}.bn.bias"] = np.zeros(spec.out_dim)
    return params


def init_buffers(spec: DenseSpec) -> dict[str, np.ndarray]:
    if not spec.batch_norm:
        return {}
    return {
        f"{spec.name}.bn.running_mean": np.zeros(spec.out_dim),
        f"{spec.name}.bn.running_var": np.ones(spec.out_dim),
    }


def gin_input_dim(base_dim: int, augmentation: Augmentation, id_width: int = 0) -> int:
    """Layer-0 width: F, +1 for a random feature, +id_width for one-hot ids."""
    augmentation = Augmentation(augmentation)
    if augmentation is Augmentation.RANDOM_FEATURES:
        return base_dim + 1
    if augmentation is Augmentation.NODE_IDS:
        return base_dim + id_width
    return base_dim


def build_gin(
    in_dim: int,
    hidden: int,
    num_layers: int,
    num_classes: int,
    task: Task | str = Task.GRAPH,
    *,
    aggregation: Aggregation | str = Aggregation.SUM,
    augmentation: Augmentation | str = Augmentation.NONE,
    epsilon: float = 0.0,
    batch_norm: bool = True,
    run_count: int = 1,
    dropout_p: float = 0.0,
    dropout_mode: DropoutMode | str = DropoutMode.ZERO_FEATURES,
    port_width: int = 0,
    seed: int = 0,
    name: str = "gin",
) -> GnnModel:
    """GIN with 2-level MLPs, batch norm after each level, and a concatenated readout.

    Each layer computes relu(bn(W2 relu(bn(W1 z + b1)) + b2)) with
    z = (1 + eps) h + sum of neighbor messages. ``in_dim`` is the width after
    augmentation. With ports, messages are relu(h_j + E [port one-hots] + c).
    """
    rng = np.random.default_rng(seed)
    augmentation = Augmentation(augmentation)
    edge_dim = 2 * port_width if augmentation is Augmentation.PORTS else 0
    layers: list[LayerSpec] = []
    params: dict[str, np.ndarray] = {}
    buffers: dict[str, np.ndarray] = {}
    width = in_dim
    for i in range(num_layers):
        prefix = f"layers.{i}"
        mlp = [
            DenseSpec(f"{prefix}.mlp.0", width, hidden, Activation.RELU, batch_norm),
            DenseSpec(f"{prefix}.mlp.1", hidden, hidden, Activation.RELU, batch_norm),
        ]
        layer = LayerSpec(prefix, width, hidden, 1.0 + epsilon, [], mlp, edge_dim)
        if edge_dim:
            edge = DenseSpec(f"{prefix}.edge", edge_dim, width, Activation.IDENTITY)
            params.update(init_dense(edge, rng))
        for dense in mlp:
            params.update(init_dense(dense, rng))
            buffers.update(init_buffers(dense))
        layers.append(layer)
        width = hidden

    readout = in_dim + num_layers * hidden
    for head in ("head", "aux_head"):
        params.update(init_dense(DenseSpec(head, readout, num_classes, Activation.IDENTITY), rng))

    return GnnModel(
        in_dim=in_dim,
        layers=layers,
        params=params,
        buffers=buffers,
        aggregation=Aggregation(aggregation),
        augmentation=augmentation,
        task=Task(task),
        num_classes=num_classes,
        run_aggregation=RunAggregation.MEAN,
        run_count=run_count,
        dropout_p=dropout_p,
        dropout_mode=DropoutMode(dropout_mode),
        epsilon=epsilon,
        port_width=port_width,
        name=name,
    )
