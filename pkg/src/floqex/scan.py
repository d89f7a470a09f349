"""Tabular scan results and their CSV/JSON serialization.

Floats are written with ``repr`` (shortest round-trip form), so parsing the
emitted CSV recovers every value bit-exactly and identical runs produce
byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def format_number(x) -> str:
    """Shortest decimal form that round-trips the value."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass
class ScanResult:
    """One named axis plus equal-length named columns, with a reproducibility echo."""

    axis_name: str
    axis: np.ndarray
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.axis)
        for name, col in self.columns.items():
            if len(col) != n:
                raise ValueError(
                    f"column {name!r} has length {len(col)}, axis has {n}"
                )

    def column_names(self):
        return [self.axis_name, *self.columns.keys()]

    def rows(self):
        cols = [self.axis, *self.columns.values()]
        for i in range(len(self.axis)):
            yield [col[i] for col in cols]

    def to_csv(self) -> str:
        lines = [",".join(self.column_names())]
        for row in self.rows():
            lines.append(",".join(format_number(x) for x in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "axis_name": self.axis_name,
            "axis": [_jsonify(x) for x in self.axis],
            "columns": {
                name: [_jsonify(x) for x in col] for name, col in self.columns.items()
            },
        }
        return json.dumps(payload, indent=1)

    def write(self, out_dir, name: str) -> list:
        """Write <name>.csv, <name>.json, and <name>.meta.json; returns the paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        csv_path = out / f"{name}.csv"
        csv_path.write_text(self.to_csv())
        paths.append(csv_path)
        json_path = out / f"{name}.json"
        json_path.write_text(self.to_json())
        paths.append(json_path)
        meta_path = out / f"{name}.meta.json"
        meta_path.write_text(json.dumps(self.metadata, indent=1, sort_keys=True))
        paths.append(meta_path)
        return paths


def _jsonify(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(x)


def parse_csv(text: str):
    """Inverse of :meth:`ScanResult.to_csv`: header list plus float columns."""
    lines = [line for line in text.splitlines() if line]
    header = lines[0].split(",")
    data = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    return header, data
