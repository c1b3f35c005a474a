"""Deterministic CSV/JSON serialization of result tables."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from . import __version__


@dataclass
class Table:
    columns: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = tuple(self.columns)
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"row of length {len(row)} for {width} columns")

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "__float__") and not isinstance(value, str):
        return "%.17g" % float(value)
    return str(value)


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    f = float(value)
    return f if math.isfinite(f) else str(f)


def to_csv(table: Table, command: str, parameters: dict, derived: Optional[dict] = None) -> str:
    buf = io.StringIO()
    buf.write(f"# gaincool {__version__}\n")
    buf.write(f"# command = {command}\n")
    for key, value in parameters.items():
        buf.write(f"# param {key} = {fmt(value)}\n")
    for key, value in (derived or {}).items():
        buf.write(f"# derived {key} = {fmt(value)}\n")
    for key, value in table.meta.items():
        buf.write(f"# result {key} = {fmt(value)}\n")
    buf.write(",".join(table.columns) + "\n")
    for row in table.rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def to_json(table: Table, command: str, parameters: dict, derived: Optional[dict] = None) -> str:
    doc = {
        "tool": f"gaincool {__version__}",
        "command": command,
        "parameters": {k: _jsonable(v) for k, v in parameters.items()},
        "derived": {k: _jsonable(v) for k, v in (derived or {}).items()},
        "result": {k: _jsonable(v) for k, v in table.meta.items()},
        "columns": list(table.columns),
        "rows": [[_jsonable(v) for v in row] for row in table.rows],
    }
    return json.dumps(doc, indent=1) + "\n"


def render(table: Table, command: str, parameters: dict, derived=None, fmt_name="csv") -> str:
    writer = to_json if fmt_name == "json" else to_csv
    return writer(table, command, parameters, derived)
