"""Output directory helpers."""

from __future__ import annotations

import os
from pathlib import Path

OUT_DIR_ENV = "DROPGNN_OUT_DIR"


def default_out_dir() -> str:
    """``$DROPGNN_OUT_DIR`` if set, otherwise ``outputs``."""
    return os.environ.get(OUT_DIR_ENV) or "outputs"


def ensure_dir(path: str | Path) -> str:
    """Create directory (and parents) if it does not exist. Returns path."""
    Path(path).mkdir(parents=True, exist_ok=True)
    return str(path)


def run_dir(out_dir: str | Path, *parts: str) -> str:
    """``out_dir/part/...``, created on demand."""
    return ensure_dir(Path(out_dir, *parts))


def shared_data_candidates(pkg_dir: str | Path, *parts: str) -> list[Path]:
    """``<prefix>/share/dropgnn/...`` for a package two or three levels below the prefix."""
    parents = Path(pkg_dir).parents
    return [parents[k] / "share" / "dropgnn" / Path(*parts) for k in (2, 3) if k < len(parents)]
