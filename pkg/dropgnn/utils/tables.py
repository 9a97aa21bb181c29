"""Schema-tagged CSV files written and read through pandas."""

from __future__ import annotations

from pathlib import Path

import pandas as pd

SCHEMA_VERSION = 1


def schema_tag(kind: str) -> str:
    return f"dropgnn.{kind}/v{SCHEMA_VERSION}"


def write_csv(frame: pd.DataFrame, path: str | Path, kind: str) -> str:
    """Write ``frame`` with a leading ``# schema: dropgnn.<kind>/v1`` line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(f"# schema: {schema_tag(kind)}\n")
        frame.to_csv(fh, index=False, float_format="%.10g")
    return str(path)


def read_schema(path: str | Path) -> str | None:
    with Path(path).open() as fh:
        first = fh.readline().strip()
    prefix = "# schema:"
    return first[len(prefix) :].strip() if first.startswith(prefix) else None


def read_csv(path: str | Path, kind: str | None = None) -> pd.DataFrame:
    """Read a tagged CSV. With ``kind`` given, the schema tag must match."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"CSV file not found: {path}")
    if kind is not None and read_schema(path) != schema_tag(kind):
        raise ValueError(f"{path} has schema {read_schema(path)!r}, expected {schema_tag(kind)!r}")
    return pd.read_csv(path, comment="#")
