"""SVG line plots for the run-count and dropout-probability sweeps."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

log = logging.getLogger(__name__)


def sweep_plot(
    frame: pd.DataFrame,
    x: str,
    path: str | Path,
    y: str = "test_acc_mean",
    err: str | None = "test_acc_std",
    log_x: bool = False,
    title: str | None = None,
    reference: float | None = None,
) -> str:
    """Accuracy against the swept parameter, with an error band and an optional reference line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = frame.sort_values(x)

    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.plot(data[x], data[y], marker="o", color="#2563eb")
    if err is not None and err in data:
        low, high = data[y] - data[err], data[y] + data[err]
        ax.fill_between(data[x], low, high, color="#2563eb", alpha=0.2)
    if reference is not None:
        ax.axvline(reference, color="#9ca3af", linestyle="--", linewidth=1.0)
    if log_x:
        ax.set_xscale("symlog", linthresh=0.01)
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    ax.set_ylim(0.0, 1.05)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    log.info("Saved plot to %s", path)
    return str(path)
