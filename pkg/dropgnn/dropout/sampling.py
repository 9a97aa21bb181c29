"""Reproducible per-run dropout masks.

Run k of a batch draws from a generator seeded by ``(master_seed, k)`` only, so a
mask never depends on which other runs were generated or in what order.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from dropgnn.graphs.core import Graph


def derive_seed(seed: int, *keys: int | str) -> int:
    """Stable 32-bit child seed of ``seed`` for the given keys."""
    words = [int(seed) & 0xFFFFFFFF]
    for key in keys:
        words.append(zlib.crc32(key.encode()) if isinstance(key, str) else int(key) & 0xFFFFFFFF)
    return int(np.random.SeedSequence(words).generate_state(1, dtype=np.uint32)[0])


def run_generator(master_seed: int, run_index: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence(
            entropy=int(master_seed) & 0xFFFFFFFFFFFFFFFF, spawn_key=(run_index,)
        )
    )


@dataclass(frozen=True)
class DropoutMask:
    dropped: np.ndarray
    run_index: int
    master_seed: int

    @property
    def seed_provenance(self) -> tuple[int, int]:
        return (self.master_seed, self.run_index)

    @property
    def kept(self) -> np.ndarray:
        return ~self.dropped


@dataclass(frozen=True)
class RunBatch:
    """r dropout masks over the same node set, stacked as an ``(r, n)`` boolean matrix."""

    masks: np.ndarray
    p: float
    master_seed: int

    def __len__(self) -> int:
        return int(self.masks.shape[0])

    def __getitem__(self, k: int) -> DropoutMask:
        return DropoutMask(self.masks[k], run_index=k, master_seed=self.master_seed)

    @property
    def node_count(self) -> int:
        return int(self.masks.shape[1])

    def drop_rate(self) -> np.ndarray:
        """Fraction of runs in which each node was dropped."""
        return self.masks.mean(axis=0)


def _one_mask(n: int, p: float, master_seed: int, k: int) -> np.ndarray:
    if p == 0.0:
        return np.zeros(n, dtype=bool)
    return run_generator(master_seed, k).random(n) < p


def sample_mask_matrix(n: int, p: float, r: int, master_seed: int, jobs: int = 1) -> np.ndarray:
    """``(r, n)`` boolean matrix; row k depends only on ``(master_seed, k)``."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"dropout probability must lie in [0, 1), got {p}")
    if r < 1:
        raise ValueError(f"run count must be >= 1, got {r}")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda k: _one_mask(n, p, master_seed, k), range(r)))
    else:
        rows = [_one_mask(n, p, master_seed, k) for k in range(r)]
    return np.stack(rows).reshape(r, n)


def sample_masks(g: Graph, p: float, r: int, master_seed: int, jobs: int = 1) -> RunBatch:
    """r i.i.d. node-dropout masks for ``g``, each node dropped with probability p."""
    masks = sample_mask_matrix(g.node_count, p, r, master_seed, jobs=jobs)
    return RunBatch(masks=masks, p=p, master_seed=master_seed)
