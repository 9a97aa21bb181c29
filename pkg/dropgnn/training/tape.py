"""Reverse-mode differentiation over the small operator set the GNN engine uses.

A ``Tape`` records every operation of one forward pass together with a closure
that maps the output gradient to gradients of its inputs. ``backward`` replays
the closures in reverse order. Everything runs in float64.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from typing import Literal

import numpy as np
import scipy.sparse as sp

from dropgnn.errors import TapeError

Mode = Literal["train", "eval"]
BackwardFn = Callable[[np.ndarray], Sequence[tuple["Var", np.ndarray]]]

BN_EPS = 1e-5
BN_MOMENTUM = 0.1


class Var:
    __slots__ = ("value", "index", "tape", "name")

    def __init__(self, value: np.ndarray, index: int, tape: Tape, name: str | None = None):
        self.value = value
        self.index = index
        self.tape = tape
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"Var#{self.index}{label}{self.value.shape}"


class Tape:
    def __init__(self, mode: Mode = "train") -> None:
        if mode not in ("train", "eval"):
            raise ValueError(f"mode must be 'train' or 'eval', got {mode!r}")
        self.mode: Mode = mode
        self._vars: list[Var] = []
        self._backward: list[BackwardFn | None] = []
        self._params: dict[str, Var] = {}
        self.buffer_updates: dict[str, np.ndarray] = {}

    @property
    def training(self) -> bool:
        return self.mode == "train"

    def __len__(self) -> int:
        return len(self._vars)

    def _record(
        self, value: np.ndarray, backward: BackwardFn | None, name: str | None = None
    ) -> Var:
        var = Var(value, len(self._vars), self, name)
        self._vars.append(var)
        self._backward.append(backward)
        return var

    # ── Leaves ────────────────────────────────────────────────────────

    def param(self, name: str, value: np.ndarray) -> Var:
        """Trainable leaf; one Var per name per tape."""
        if name not in self._params:
            self._params[name] = self._record(np.asarray(value, dtype=np.float64), None, name)
        return self._params[name]

    def constant(self, value: np.ndarray) -> Var:
        return self._record(np.asarray(value, dtype=np.float64), None)

    # ── Dense algebra ─────────────────────────────────────────────────

    def matmul(self, x: Var, w: Var) -> Var:
        xv, wv = x.value, w.value
        return self._record(xv @ wv, lambda g: [(x, g @ wv.T), (w, xv.T @ g)])

    def add_bias(self, x: Var, b: Var) -> Var:
        return self._record(x.value + b.value, lambda g: [(x, g), (b, g.sum(axis=0))])

    def add(self, x: Var, y: Var) -> Var:
        return self._record(x.value + y.value, lambda g: [(x, g), (y, g)])

    def scale(self, x: Var, c: float) -> Var:
        return self._record(c * x.value, lambda g: [(x, c * g)])

    def row_scale(self, x: Var, weights: np.ndarray) -> Var:
        """Multiply row i by the constant ``weights[i]``."""
        w = np.asarray(weights, dtype=np.float64)[:, None]
        return self._record(x.value * w, lambda g: [(x, g * w)])

    def concat(self, parts: Sequence[Var]) -> Var:
        widths = [p.value.shape[1] for p in parts]
        bounds = np.cumsum([0, *widths])

        def backward(g: np.ndarray) -> list[tuple[Var, np.ndarray]]:
            return [(p, g[:, bounds[i] : bounds[i + 1]]) for i, p in enumerate(parts)]

        return self._record(np.concatenate([p.value for p in parts], axis=1), backward)

    def activation(self, x: Var, kind: str) -> Var:
        """identity, relu, step (x >= 0 -> 1) or strict_step (x > 0 -> 1).

        The step functions are treated as constants in the backward pass.
        """
        v = x.value
        if kind == "identity":
            return self._record(v, lambda g: [(x, g)])
        if kind == "relu":
            on = v > 0
            return self._record(np.where(on, v, 0.0), lambda g: [(x, g * on)])
        if kind == "step":
            return self._record((v >= 0).astype(np.float64), lambda g: [])
        if kind == "strict_step":
            return self._record((v > 0).astype(np.float64), lambda g: [])
        raise ValueError(f"unknown activation '{kind}'")

    # ── Sparse structure ──────────────────────────────────────────────

    def sparse_matmul(self, s: sp.csr_matrix, x: Var) -> Var:
        """``s @ x`` for a constant sparse matrix (gather, scatter-sum, mean, pooling)."""
        st = s.T.tocsr()
        return self._record(np.asarray(s @ x.value), lambda g: [(x, np.asarray(st @ g))])

    def segment_max(self, x: Var, segments: np.ndarray, num_segments: int) -> Var:
        """Row-wise max of ``x`` grouped by ``segments``; empty segments give 0.

        The gradient of each output entry flows to the first maximal row only.
        """
        v = x.value
        rows, dim = v.shape
        out = np.zeros((num_segments, dim))
        if rows == 0:
            return self._record(out, lambda g: [(x, np.zeros_like(v))])
        order = np.argsort(segments, kind="stable")
        seg_sorted = segments[order]
        vals = v[order]
        starts = np.flatnonzero(np.r_[True, seg_sorted[1:] != seg_sorted[:-1]])
        owners = seg_sorted[starts]
        best = np.maximum.reduceat(vals, starts, axis=0)
        out[owners] = best
        position = np.arange(rows)[:, None]
        hits = np.where(vals == out[seg_sorted], position, rows)
        winners = order[np.minimum.reduceat(hits, starts, axis=0)]

        def backward(g: np.ndarray) -> list[tuple[Var, np.ndarray]]:
            gx = np.zeros_like(v)
            cols = np.broadcast_to(np.arange(dim), winners.shape)
            gx[winners, cols] = g[owners]
            return [(x, gx)]

        return self._record(out, backward)

    # ── Normalization ─────────────────────────────────────────────────

    def batch_norm(
        self,
        x: Var,
        gamma: Var,
        beta: Var,
        running_mean: np.ndarray,
        running_var: np.ndarray,
        name: str,
        momentum: float = BN_MOMENTUM,
    ) -> Var:
        """Batch normalization over rows.

        Train mode normalizes with batch statistics and stages the running-stat
        update in ``buffer_updates``; eval mode uses the running statistics.
        """
        v, gv, bv = x.value, gamma.value, beta.value
        if not self.training:
            inv = 1.0 / np.sqrt(running_var + BN_EPS)
            xhat = (v - running_mean) * inv
            return self._record(
                xhat * gv + bv,
                lambda g: [(x, g * gv * inv), (gamma, (g * xhat).sum(0)), (beta, g.sum(0))],
            )

        m = v.shape[0]
        mu = v.mean(axis=0)
        var = v.var(axis=0)
        inv = 1.0 / np.sqrt(var + BN_EPS)
        xhat = (v - mu) * inv
        unbiased = var * m / (m - 1) if m > 1 else var
        self.buffer_updates[f"{name}.running_mean"] = (1 - momentum) * running_mean + momentum * mu
        new_var = (1 - momentum) * running_var + momentum * unbiased
        self.buffer_updates[f"{name}.running_var"] = new_var

        def backward(g: np.ndarray) -> list[tuple[Var, np.ndarray]]:
            dxhat = g * gv
            gx = inv / m * (m * dxhat - dxhat.sum(0) - xhat * (dxhat * xhat).sum(0))
            return [(x, gx), (gamma, (g * xhat).sum(0)), (beta, g.sum(0))]

        return self._record(xhat * gv + bv, backward)

    # ── Run aggregation ───────────────────────────────────────────────

    def run_mean(self, x: Var, present: np.ndarray) -> Var:
        """Mean over runs of an ``(R*N, d)`` stack, skipping entries where ``present`` is False.

        Values are shifted by their minimum and summed in sorted order, so the
        result does not depend on run order and r identical runs reproduce the
        single-run value exactly. Nodes absent from every run get 0.
        """
        present = np.asarray(present, dtype=bool)
        runs, n = present.shape
        v = x.value.reshape(runs, n, -1)
        mask = present[:, :, None]
        count = present.sum(axis=0).astype(np.float64)
        ref = np.where(mask, v, np.inf).min(axis=0)
        ref = np.where(np.isfinite(ref), ref, 0.0)
        shifted = np.sort(np.where(mask, v - ref, 0.0), axis=0).sum(axis=0)
        denom = np.maximum(count, 1.0)[:, None]
        out = np.where(count[:, None] > 0, ref + shifted / denom, 0.0)
        scale = (present / np.maximum(count, 1.0))[:, :, None]

        def backward(g: np.ndarray) -> list[tuple[Var, np.ndarray]]:
            return [(x, (scale * g[None, :, :]).reshape(x.value.shape))]

        return self._record(out, backward)

    def run_sum(self, x: Var, present: np.ndarray) -> Var:
        """Sum over runs of present entries, accumulated in sorted order."""
        present = np.asarray(present, dtype=bool)
        runs, n = present.shape
        v = x.value.reshape(runs, n, -1)
        mask = present[:, :, None]
        out = np.sort(np.where(mask, v, 0.0), axis=0).sum(axis=0)
        weight = mask.astype(np.float64)

        def backward(g: np.ndarray) -> list[tuple[Var, np.ndarray]]:
            return [(x, (weight * g[None, :, :]).reshape(x.value.shape))]

        return self._record(out, backward)

    # ── Scalar losses ─────────────────────────────────────────────────

    def cross_entropy(self, logits: Var, labels: np.ndarray, coef: np.ndarray) -> Var:
        """``sum_i coef[i] * -log softmax(logits[i])[labels[i]]`` as a scalar."""
        z = logits.value
        labels = np.asarray(labels, dtype=np.int64)
        coef = np.asarray(coef, dtype=np.float64)
        classes = z.shape[1]
        if labels.size and (labels.min() < 0 or labels.max() >= classes):
            raise ValueError(f"labels must lie in 0..{classes - 1}")
        shift = z - z.max(axis=1, keepdims=True)
        logsum = np.log(np.exp(shift).sum(axis=1))
        rows = np.arange(z.shape[0])
        nll = logsum - shift[rows, labels]
        probs = np.exp(shift - logsum[:, None])

        def backward(g: np.ndarray) -> list[tuple[Var, np.ndarray]]:
            grad = probs.copy()
            grad[rows, labels] -= 1.0
            return [(logits, float(g) * coef[:, None] * grad)]

        return self._record(np.array(float(np.dot(coef, nll))), backward)

    def sum_squares(self, x: Var) -> Var:
        v = x.value
        return self._record(np.array(float((v * v).sum())), lambda g: [(x, 2.0 * float(g) * v)])

    def weighted_sum(self, terms: Sequence[tuple[float, Var]]) -> Var:
        total = float(sum(c * float(t.value) for c, t in terms))
        return self._record(
            np.array(total), lambda g: [(t, np.asarray(c * g, dtype=np.float64)) for c, t in terms]
        )

    # ── Backward ──────────────────────────────────────────────────────

    def backward(
        self,
        loss: Var,
        params: Mapping[str, np.ndarray] | None = None,
        loss_grad: float = 1.0,
    ) -> dict[str, np.ndarray]:
        """Gradients of ``loss`` for every parameter.

        Parameters listed in ``params`` but never used in the forward pass get
        zero gradients.
        """
        if not self._vars:
            raise TapeError("backward called before any forward operation was recorded")
        if not self.training:
            raise TapeError("backward requires a forward pass recorded in train mode")
        if loss.tape is not self:
            raise TapeError("loss was recorded on a different tape")
        if loss.value.size != 1:
            raise TapeError(f"loss must be a scalar, got shape {loss.value.shape}")

        grads: dict[int, np.ndarray] = {loss.index: np.full(loss.value.shape, float(loss_grad))}
        for index in range(loss.index, -1, -1):
            g = grads.pop(index, None)
            fn = self._backward[index]
            if g is None or fn is None:
                if g is not None:
                    grads[index] = g
                continue
            for parent, pg in fn(g):
                if parent.index in grads:
                    grads[parent.index] = grads[parent.index] + pg
                else:
                    grads[parent.index] = pg

        out: dict[str, np.ndarray] = {}
        names = params.keys() if params is not None else self._params.keys()
        for name in names:
            var = self._params.get(name)
            if var is not None and var.index in grads:
                out[name] = np.asarray(grads[var.index], dtype=np.float64).reshape(var.value.shape)
            else:
                shape = params[name].shape if params is not None else var.value.shape
                out[name] = np.zeros(shape)
        return out
