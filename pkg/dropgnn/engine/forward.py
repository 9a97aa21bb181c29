"""Message passing over a batch of graphs, optionally replicated over dropout runs.

Runs are laid out run-major: row ``k * N + v`` holds node v of run k, where N is
the total node count of the batch. Every run shares the model parameters.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp

from dropgnn.dropout.sampling import DropoutMask, RunBatch, sample_mask_matrix
from dropgnn.engine.model import (
    Activation,
    Aggregation,
    DenseSpec,
    DropoutMode,
    GnnModel,
    RunAggregation,
    Task,
)
from dropgnn.errors import DimensionMismatchError
from dropgnn.graphs.core import Graph
from dropgnn.training.tape import Tape, Var

log = logging.getLogger(__name__)


# ── Batches ───────────────────────────────────────────────────────────


@dataclass(frozen=True)
class GraphBatch:
    """Disjoint union of graphs with per-node graph membership."""

    graphs: tuple[Graph, ...]
    features: np.ndarray
    src: np.ndarray
    dst: np.ndarray
    graph_index: np.ndarray
    offsets: np.ndarray
    edge_features: np.ndarray | None = None

    @classmethod
    def from_graphs(cls, graphs: Sequence[Graph], port_width: int = 0) -> GraphBatch:
        if not graphs:
            raise ValueError("cannot batch an empty graph list")
        dims = {g.feature_dim for g in graphs}
        if len(dims) != 1:
            raise DimensionMismatchError(f"graphs disagree on feature width: {sorted(dims)}")
        offsets = np.cumsum([0, *(g.node_count for g in graphs)])
        srcs, dsts, ports = [], [], []
        for g, off in zip(graphs, offsets):
            s, d = g.directed_edges()
            srcs.append(s + off)
            dsts.append(d + off)
            if port_width:
                ports.append(_port_features(g, s, d, port_width))
        graph_index = np.repeat(np.arange(len(graphs)), np.diff(offsets))
        return cls(
            graphs=tuple(graphs),
            features=np.concatenate([g.features for g in graphs], axis=0),
            src=np.concatenate(srcs),
            dst=np.concatenate(dsts),
            graph_index=graph_index,
            offsets=offsets,
            edge_features=np.concatenate(ports, axis=0) if port_width else None,
        )

    @property
    def node_count(self) -> int:
        return int(self.offsets[-1])

    @property
    def num_graphs(self) -> int:
        return len(self.graphs)


def _port_features(g: Graph, src: np.ndarray, dst: np.ndarray, width: int) -> np.ndarray:
    """One-hot of the sender's port followed by one-hot of the receiver's port."""
    if g.ports is None:
        raise DimensionMismatchError("model expects ports but the graph carries none")
    out = np.zeros((len(src), 2 * width))
    for e, (v, w) in enumerate(zip(src.tolist(), dst.tolist())):
        out_port, in_port = g.port(v, w), g.port(w, v)
        if max(out_port, in_port) >= width:
            raise DimensionMismatchError(f"port {max(out_port, in_port)} exceeds width {width}")
        out[e, out_port] = 1.0
        out[e, width + in_port] = 1.0
    return out


# ── Layers ────────────────────────────────────────────────────────────


def apply_dense(tape: Tape, model: GnnModel, spec: DenseSpec, x: Var) -> Var:
    p = model.params
    z = tape.matmul(x, tape.param(f"{spec.name}.weight", p[f"{spec.name}.weight"]))
    z = tape.add_bias(z, tape.param(f"{spec.name}.bias", p[f"{spec.name}.bias"]))
    if spec.batch_norm:
        bn = f"{spec.name}.bn"
        z = tape.batch_norm(
            z,
            tape.param(f"{bn}.weight", p[f"{bn}.weight"]),
            tape.param(f"{bn}.bias", p[f"{bn}.bias"]),
            model.buffers[f"{bn}.running_mean"],
            model.buffers[f"{bn}.running_var"],
            bn,
        )
    return tape.activation(z, spec.activation.value)


@dataclass
class _Structure:
    """Sparse operators of one replicated batch."""

    rows: int
    src: np.ndarray
    dst: np.ndarray
    gather: sp.csr_matrix
    scatter: sp.csr_matrix
    neighbor: sp.csr_matrix
    edge_features: np.ndarray | None


def _structure(model: GnnModel, batch: GraphBatch, keep: np.ndarray) -> _Structure:
    runs, n = keep.shape
    base = (np.arange(runs) * n)[:, None]
    src = (batch.src[None, :] + base).ravel()
    dst = (batch.dst[None, :] + base).ravel()
    edge_features = None
    if batch.edge_features is not None:
        edge_features = np.tile(batch.edge_features, (runs, 1))
    if model.dropout_mode is DropoutMode.REMOVE_NODES:
        flat = keep.ravel()
        alive = flat[src] & flat[dst]
        src, dst = src[alive], dst[alive]
        if edge_features is not None:
            edge_features = edge_features[alive]

    rows, edges = runs * n, len(src)
    ones = np.ones(edges)
    if model.aggregation is Aggregation.MEAN:
        indegree = np.bincount(dst, minlength=rows).astype(np.float64)
        weights = 1.0 / indegree[dst]
    else:
        weights = ones
    gather = sp.csr_matrix((ones, (np.arange(edges), src)), shape=(edges, rows))
    scatter = sp.csr_matrix((weights, (dst, np.arange(edges))), shape=(rows, edges))
    neighbor = sp.csr_matrix((weights, (dst, src)), shape=(rows, rows))
    return _Structure(rows, src, dst, gather, scatter, neighbor, edge_features)


def _aggregate(tape: Tape, model: GnnModel, layer_index: int, h: Var, st: _Structure) -> Var:
    layer = model.layers[layer_index]
    if not layer.edge_dim and model.aggregation is not Aggregation.MAX:
        return tape.sparse_matmul(st.neighbor, h)
    messages = tape.sparse_matmul(st.gather, h)
    if layer.edge_dim:
        if st.edge_features is None:
            raise DimensionMismatchError(f"{layer.name} expects port features")
        edge = DenseSpec(f"{layer.name}.edge", layer.edge_dim, layer.in_dim, Activation.IDENTITY)
        embedded = apply_dense(tape, model, edge, tape.constant(st.edge_features))
        messages = tape.activation(tape.add(messages, embedded), "relu")
    if model.aggregation is Aggregation.MAX:
        return tape.segment_max(messages, st.dst, st.rows)
    return tape.sparse_matmul(st.scatter, messages)


def propagate(model: GnnModel, batch: GraphBatch, keep: np.ndarray, tape: Tape) -> list[Var]:
    """Per-layer node states over all runs; entry 0 is the (masked) input."""
    keep = np.asarray(keep, dtype=bool)
    if keep.ndim != 2 or keep.shape[1] != batch.node_count:
        raise DimensionMismatchError(
            f"mask shape {keep.shape} does not match {batch.node_count} nodes"
        )
    if batch.features.shape[1] != model.in_dim:
        raise DimensionMismatchError(
            f"model expects {model.in_dim} input features, graphs carry {batch.features.shape[1]}"
        )
    runs = keep.shape[0]
    flat = keep.ravel().astype(np.float64)
    st = _structure(model, batch, keep)
    h = tape.constant(np.tile(batch.features, (runs, 1)) * flat[:, None])
    outputs = [h]
    for i, layer in enumerate(model.layers):
        agg = _aggregate(tape, model, i, h, st)
        for dense in layer.neighbor_mlp:
            agg = apply_dense(tape, model, dense, agg)
        if layer.self_coef == 0.0:
            z = agg
        elif layer.self_coef == 1.0:
            z = tape.add(h, agg)
        else:
            z = tape.add(tape.scale(h, layer.self_coef), agg)
        for dense in layer.update_mlp:
            z = apply_dense(tape, model, dense, z)
        if model.dropout_mode is DropoutMode.ZERO_EVERY_LAYER:
            z = tape.row_scale(z, flat)
        h = z
        outputs.append(h)
    return outputs


# ── Readout ───────────────────────────────────────────────────────────


@dataclass
class RunOutputs:
    """Readouts of one replicated forward pass.

    ``final`` is the head applied once to the run aggregate: logits of shape
    (N, C) or (B, C), or the aggregated embedding for embedding models.
    ``per_run`` holds each run's own readout, stacked run-major, and
    ``per_run_present`` flags the entries that exist in their run.
    """

    keep: np.ndarray
    layers: list[Var]
    embedding: Var
    final: Var
    per_run: Var
    per_run_present: np.ndarray
    buffer_updates: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def runs(self) -> int:
        return int(self.keep.shape[0])


def _run_aggregate(tape: Tape, model: GnnModel, x: Var, present: np.ndarray) -> Var:
    if model.run_aggregation is RunAggregation.MEAN:
        return tape.run_mean(x, present)
    return tape.run_sum(x, present)


def _head(tape: Tape, model: GnnModel, name: str, x: Var) -> Var:
    spec = DenseSpec(name, model.readout_dim, int(model.num_classes), Activation.IDENTITY)
    return apply_dense(tape, model, spec, x)


def readout(
    model: GnnModel, batch: GraphBatch, layers: list[Var], keep: np.ndarray, tape: Tape
) -> RunOutputs:
    runs, n = keep.shape
    last = layers[-1]
    embedding = tape.run_mean(last, keep)

    if model.task is Task.EMBEDDING:
        per_run = last
        if model.run_transform is not None:
            per_run = apply_dense(tape, model, model.run_transform, last)
        final = _run_aggregate(tape, model, per_run, keep)
        return RunOutputs(keep, layers, embedding, final, per_run, keep)

    stacked = tape.concat(layers) if len(layers) > 1 else layers[0]
    if model.task is Task.NODE:
        final = _head(tape, model, "head", _run_aggregate(tape, model, stacked, keep))
        per_run = _head(tape, model, "aux_head", stacked)
        return RunOutputs(keep, layers, embedding, final, per_run, keep)

    b = batch.num_graphs
    weights = np.ones(runs * n)
    if model.dropout_mode is DropoutMode.REMOVE_NODES:
        weights = keep.ravel().astype(np.float64)
    pool_rows = (np.arange(runs)[:, None] * b + batch.graph_index[None, :]).ravel()
    pool = sp.csr_matrix((weights, (pool_rows, np.arange(runs * n))), shape=(runs * b, runs * n))
    pooled = tape.sparse_matmul(pool, stacked)
    every_run = np.ones((runs, b), dtype=bool)
    final = _head(tape, model, "head", _run_aggregate(tape, model, pooled, every_run))
    per_run = _head(tape, model, "aux_head", pooled)
    return RunOutputs(keep, layers, embedding, final, per_run, every_run)


def forward_batch(model: GnnModel, batch: GraphBatch, keep: np.ndarray, tape: Tape) -> RunOutputs:
    """Replicated forward with fixed keep masks ``(R, N)``, recorded on ``tape``."""
    keep = np.asarray(keep, dtype=bool)
    out = readout(model, batch, propagate(model, batch, keep, tape), keep, tape)
    out.buffer_updates = dict(tape.buffer_updates)
    return out


def sample_keep(model: GnnModel, node_count: int, seed: int, runs: int | None = None) -> np.ndarray:
    """Keep masks for ``runs`` (default: the model's run count) independent runs."""
    runs = model.run_count if runs is None else runs
    return ~sample_mask_matrix(node_count, model.dropout_p, runs, seed)


# ── Single-graph API ──────────────────────────────────────────────────


@dataclass
class ForwardResult:
    node_embeddings: np.ndarray
    present: np.ndarray
    layer_embeddings: list[np.ndarray]
    graph_embedding: np.ndarray | None = None
    logits: np.ndarray | None = None


def gnn_forward(
    model: GnnModel,
    g: Graph,
    mask: DropoutMask | np.ndarray | None = None,
    mode: Literal["train", "eval"] = "eval",
) -> ForwardResult:
    """One run on one graph. ``mask`` marks dropped nodes; None drops nothing.

    In train mode batch norm uses batch statistics and the running statistics
    of ``model`` are updated.
    """
    dropped = np.zeros(g.node_count, dtype=bool) if mask is None else mask
    if isinstance(dropped, DropoutMask):
        dropped = dropped.dropped
    dropped = np.asarray(dropped, dtype=bool)
    if dropped.shape != (g.node_count,):
        raise DimensionMismatchError(
            f"mask length {dropped.shape} does not match {g.node_count} nodes"
        )
    batch = GraphBatch.from_graphs([g], port_width=model.port_width)
    tape = Tape(mode)
    keep = ~dropped[None, :]
    out = forward_batch(model, batch, keep, tape)
    if mode == "train":
        model.commit(out.buffer_updates)

    layers = [v.value for v in out.layers]
    result = ForwardResult(
        node_embeddings=layers[-1],
        present=keep[0].copy(),
        layer_embeddings=layers,
    )
    if model.task is Task.GRAPH:
        weights = keep[0].astype(np.float64)
        if model.dropout_mode is not DropoutMode.REMOVE_NODES:
            weights = np.ones(g.node_count)
        result.graph_embedding = weights @ np.concatenate(layers, axis=1)
    if model.task is not Task.EMBEDDING:
        result.logits = out.final.value
    return result


@dataclass
class DropForwardResult:
    node_embeddings: np.ndarray
    run_readouts: np.ndarray
    run_present: np.ndarray
    masks: RunBatch
    logits: np.ndarray | None = None
    output: np.ndarray | None = None


def drop_gnn_forward(
    model: GnnModel,
    g: Graph | Sequence[Graph],
    master_seed: int,
    runs: int | None = None,
) -> DropForwardResult:
    """Evaluate ``model`` over r independently masked runs and aggregate them.

    Each run is propagated on its own, so the aggregate of r identical runs
    equals a single ``gnn_forward`` exactly. ``runs`` overrides the model's
    run count.
    """
    graphs = [g] if isinstance(g, Graph) else list(g)
    batch = GraphBatch.from_graphs(graphs, port_width=model.port_width)
    r = model.run_count if runs is None else runs
    masks = RunBatch(
        masks=sample_mask_matrix(batch.node_count, model.dropout_p, r, master_seed),
        p=model.dropout_p,
        master_seed=master_seed,
    )
    keep = ~masks.masks
    tape = Tape("eval")
    per_run_layers = [propagate(model, batch, keep[k : k + 1], tape) for k in range(r)]
    stacked = [
        tape.constant(np.concatenate([run[i].value for run in per_run_layers], axis=0))
        for i in range(len(model.layers) + 1)
    ]
    out = readout(model, batch, stacked, keep, tape)
    rows = out.per_run.value
    log.debug("drop_gnn_forward: %d runs over %d nodes", r, batch.node_count)
    result = DropForwardResult(
        node_embeddings=out.embedding.value,
        run_readouts=rows.reshape(r, -1, rows.shape[1]),
        run_present=out.per_run_present,
        masks=masks,
    )
    if model.task is Task.EMBEDDING:
        result.output = out.final.value
    else:
        result.logits = out.final.value
    return result
