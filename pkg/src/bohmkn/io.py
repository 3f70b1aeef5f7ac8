"""CSV and JSON tables with round-trip-exact floats.

CSV layout: ``# key: value`` header lines, one line of column names, then
rows.  Floats are written with ``repr`` (shortest string that parses back to
the same double).  The JSON form mirrors the CSV one.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    header: dict = field(default_factory=dict)


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):  # numpy scalar
        return _cell(v.item())
    return str(v)


def _plain(v):
    if hasattr(v, "item"):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    return v


def to_csv(t: Table) -> str:
    buf = io.StringIO()
    for k, v in t.header.items():
        buf.write(f"# {k}: {_cell(v) if not isinstance(v, (list, dict)) else json.dumps(_plain(v))}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(t.columns)
    for r in t.rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def to_json(t: Table) -> str:
    doc = {"header": _plain(t.header), "columns": t.columns, "rows": [_plain(list(r)) for r in t.rows]}
    return json.dumps(doc, indent=1) + "\n"


def render(t: Table, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(t)
    if fmt == "json":
        return to_json(t)
    raise ValueError(f"unknown format {fmt!r}")


def read_csv(text: str) -> Table:
    header: dict = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, val = lines[i][1:].strip().partition(": ")
        header[key] = val
        i += 1
    rdr = list(csv.reader(lines[i:]))
    if not rdr:
        return Table([], [], header)
    return Table(rdr[0], rdr[1:], header)
