"""Human-readable reports rendered from Jinja2 templates."""

from __future__ import annotations

import importlib.util
from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from dropgnn.utils.file_utils import shared_data_candidates


def template_dir() -> str:
    """templates/reports, from the repo checkout or the wheel's shared-data."""
    candidates = [Path(__file__).parents[2] / "templates" / "reports"]
    if candidates[0].is_dir():
        return str(candidates[0])
    spec = importlib.util.find_spec("dropgnn")
    if spec and spec.origin:
        pkg_dir = Path(spec.origin).parent
        candidates += shared_data_candidates(pkg_dir, "templates", "reports")
    for candidate in candidates:
        if candidate.is_dir():
            return str(candidate)
    raise FileNotFoundError("Cannot locate templates/reports. Run 'pip install -e .'.")


def _make_env() -> Environment:
    env = Environment(
        loader=FileSystemLoader(template_dir()),
        trim_blocks=True,
        lstrip_blocks=True,
        undefined=StrictUndefined,
        keep_trailing_newline=True,
    )
    env.filters["fmt"] = lambda value, spec=".4f": format(value, spec)
    return env


def render(
    template_name: str, context: dict[str, Any], output_path: str | Path | None = None
) -> str:
    """Render ``template_name``; also write it to ``output_path`` when given."""
    content = _make_env().get_template(template_name).render(**context)
    if output_path is not None:
        Path(output_path).parent.mkdir(parents=True, exist_ok=True)
        Path(output_path).write_text(content)
    return content
