"""Tabular results with a fixed, versioned column layout and CSV/JSON round trips."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


def _clean(value):
    """Make a cell serialisable: numpy scalars to Python, non-finite floats to None."""
    if value is None or isinstance(value, (bool, str)):
        return value
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class SweepTable:
    """Rectangular table of result rows.

    ``axis`` describes the swept variable (name and grid) when there is one;
    ``meta`` is written only when ``with_meta`` is requested on output.
    """

    columns: list[str]
    rows: list[list] = field(default_factory=list)
    axis: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if "schema_version" in self.columns:
            self.columns = [c for c in self.columns if c != "schema_version"]
            self.rows = [r[1:] for r in self.rows]
        self.rows = [[_clean(v) for v in r] for r in self.rows]
        for r in self.rows:
            if len(r) != len(self.columns):
                raise ValueError(f"row has {len(r)} cells, expected {len(self.columns)}")

    @classmethod
    def from_dicts(cls, rows, columns=None, **kwargs) -> "SweepTable":
        rows = list(rows)
        if columns is None:
            columns = []
            for r in rows:
                columns.extend(k for k in r if k not in columns)
        return cls(list(columns), [[r.get(c) for c in columns] for r in rows], **kwargs)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def dicts(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SweepTable):
            return NotImplemented
        return self.columns == other.columns and self.rows == other.rows

    # csv ------------------------------------------------------------------

    def to_csv(self, with_meta: bool = False) -> str:
        buf = io.StringIO()
        if with_meta and self.meta:
            buf.write("# " + json.dumps(self.meta, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
        w.writerow(["schema_version", *self.columns])
        for r in self.rows:
            w.writerow([str(SCHEMA_VERSION), *map(_format_cell, r)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        lines = [ln for ln in text.splitlines(keepends=True) if not ln.startswith("#")]
        reader = csv.reader(lines)
        header = next(reader)
        rows = [[_parse_cell(c) for c in r] for r in reader]
        return cls(header, rows)

    # json -----------------------------------------------------------------

    def to_json(self, with_meta: bool = False) -> str:
        doc = {"schema_version": SCHEMA_VERSION, "axis": self.axis, "columns": self.columns, "rows": self.rows}
        if with_meta and self.meta:
            doc["meta"] = self.meta
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
        return cls(doc["columns"], doc["rows"], axis=doc.get("axis", {}), meta=doc.get("meta", {}))

    def dumps(self, fmt: str, with_meta: bool = False) -> str:
        if fmt == "csv":
            return self.to_csv(with_meta)
        if fmt == "json":
            return self.to_json(with_meta)
        raise ValueError(f"unknown format {fmt!r}")
