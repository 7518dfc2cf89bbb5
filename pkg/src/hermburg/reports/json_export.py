"""
JSON Report Export

Reports are written with sorted keys and without timestamps, so the same
run always produces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from hermburg.noise.grid import FieldSample


def _default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


def dumps(data: dict[str, Any], pretty: bool = True) -> str:
    """Deterministic JSON text of a report dictionary."""
    if pretty:
        return json.dumps(data, indent=2, sort_keys=True, default=_default)
    return json.dumps(data, sort_keys=True, default=_default)


def save_json_report(data: dict[str, Any], path: str | Path) -> Path:
    """
    Save a report dictionary as JSON.

    Args:
        data: Report content (anything with to_dict() already applied)
        path: Output path; parent directories are created

    Returns:
        Path to the saved file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(data), encoding="utf-8")
    return path


def save_field_json(sample: FieldSample, path: str | Path) -> Path:
    """Save a field as JSON: metadata plus nested values."""
    data = sample.to_dict()
    if sample.params is not None:
        data["params"] = sample.params.model_dump(mode="json")
    data["values"] = sample.values.tolist()
    return save_json_report(data, path)
