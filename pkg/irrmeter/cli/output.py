"""
Serialization of command results.
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, Optional

import pandas as pd

from irrmeter.cli.runconfig import OutputFormat


@dataclass
class CommandResult:
    """Payload of a command, its exit code and an optional tabular view."""

    payload: Dict[str, Any]
    exit_code: int = 0
    frame: Optional[pd.DataFrame] = None


def to_json(payload: Dict[str, Any]) -> str:
    """Deterministic JSON: sorted keys, two-space indent."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, default=str)


def to_csv(result: CommandResult) -> str:
    """The command's table, or the payload flattened to a single row."""
    frame = result.frame
    if frame is None:
        flat = pd.json_normalize(result.payload, sep=".")
        frame = flat.reindex(sorted(flat.columns), axis=1)
    return frame.to_csv(index=False, lineterminator="\n")


def _text_lines(value: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines: list[str] = []
    if isinstance(value, dict):
        if {"lo", "hi", "prec_bits"} <= set(value):
            return [f"{pad}[{value['lo']}, {value['hi']}] ({value['prec_bits']} bits)"]
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and item:
                nested = _text_lines(item, indent + 1)
                if len(nested) == 1 and isinstance(item, dict) and {"lo", "hi"} <= set(item):
                    lines.append(f"{pad}{key}: {nested[0].strip()}")
                else:
                    lines.append(f"{pad}{key}:")
                    lines.extend(nested)
            else:
                lines.append(f"{pad}{key}: {item}")
        return lines
    if isinstance(value, list):
        for item in value:
            nested = _text_lines(item, indent + 1)
            if nested:
                lines.append(f"{pad}- {nested[0].strip()}")
                lines.extend(nested[1:])
        return lines
    return [f"{pad}{value}"]


def to_text(payload: Dict[str, Any]) -> str:
    """Indented key: value rendering of the payload."""
    return "\n".join(_text_lines(payload)) + "\n"


def render(result: CommandResult, fmt: OutputFormat) -> str:
    """Serialize a result in the requested format."""
    if fmt is OutputFormat.CSV:
        return to_csv(result)
    if fmt is OutputFormat.TEXT:
        return to_text(result.payload)
    return to_json(result.payload) + "\n"
