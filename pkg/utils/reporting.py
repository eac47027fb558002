"""
Report Rendering
JSON and plain-text output for CLI reports
"""
import json
from dataclasses import is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, List

import numpy as np
import pandas as pd

from core.rational_function import RationalFunction


def to_jsonable(value: Any) -> Any:
    """Recursively convert exact and numpy values into JSON-friendly ones"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, RationalFunction):
        return value.to_text()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, int):
        return value
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if is_dataclass(value) and hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    return str(value)


def _is_matrix(value: Any) -> bool:
    return (
        isinstance(value, list)
        and value
        and all(isinstance(row, list) and not any(isinstance(x, (dict, list)) for x in row) for row in value)
    )


def _is_records(value: Any) -> bool:
    return isinstance(value, list) and value and all(isinstance(row, dict) for row in value)


def _flat_record(record: dict) -> dict:
    return {k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in record.items()}


def _render_text(value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    for key, item in value.items():
        if isinstance(item, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(item, indent + 1))
        elif _is_records(item):
            lines.append(f"{pad}{key}:")
            frame = pd.DataFrame([_flat_record(r) for r in item])
            lines.extend(f"{pad}  {line}" for line in frame.to_string(index=False).splitlines())
        elif _is_matrix(item):
            lines.append(f"{pad}{key}:")
            frame = pd.DataFrame(item)
            table = frame.to_string(index=False, header=False)
            lines.extend(f"{pad}  {line}" for line in table.splitlines())
        else:
            lines.append(f"{pad}{key}: {item if not isinstance(item, list) else json.dumps(item)}")
    return lines


def render(report: dict, fmt: str = "text") -> str:
    """
    Render a report deterministically.

    Args:
        report: Nested dict (values may be Fractions, arrays, dataclasses)
        fmt: "json" or "text"
    """
    data = to_jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=True)
    return "\n".join(_render_text(data))
