"""Deterministic CSV and JSON emitters for tabular results.

A table is a list of column names, a list of rows (tuples of str/int/float)
and an ordered list of named scalar checks. Floats are written with 17
significant digits in CSV and with the shortest round-trip repr in JSON, so
identical jobs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from . import __version__

TOOL = "diracdelta"


@dataclass
class Table:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    checks: list[tuple[str, object]] = field(default_factory=list)

    def add_check(self, name: str, value) -> None:
        self.checks.append((name, value))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.16e" % v
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def to_csv(table: Table, command: str, config: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# tool = {TOOL} {__version__}\n")
    buf.write(f"# command = {command}\n")
    buf.write(f"# config = {json.dumps(_json_value(config), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_csv_cell(v) for v in row])
    for name, value in table.checks:
        buf.write(f"# {name} = {_csv_cell(value)}\n")
    return buf.getvalue()


def to_json(table: Table, command: str, config: dict) -> str:
    doc = {
        "tool": f"{TOOL} {__version__}",
        "command": command,
        "config": _json_value(config),
        "columns": list(table.columns),
        "rows": [_json_value(list(r)) for r in table.rows],
        "checks": {name: _json_value(v) for name, v in table.checks},
    }
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def render(table: Table, fmt: str, command: str, config: dict) -> str:
    if fmt == "csv":
        return to_csv(table, command, config)
    if fmt == "json":
        return to_json(table, command, config)
    raise ValueError(f"unknown output format {fmt!r}")
