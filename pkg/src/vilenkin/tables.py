"""CSV emission with a fixed byte format (LF endings, shortest round-trip floats)."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Integral, Real
from typing import Any


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, (Real, Fraction)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite cell {value!r}")
        if value == 0.0:
            return "0"
        return repr(value)
    return str(value)


@dataclass
class CsvTable:
    header: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def append(self, *row: Any) -> None:
        if len(row) != len(self.header):
            raise ValueError(f"row has {len(row)} cells, header has {len(self.header)}")
        self.rows.append(list(row))

    def column(self, name: str) -> list[Any]:
        i = self.header.index(name)
        return [r[i] for r in self.rows]

    def to_text(self) -> str:
        buf = io.StringIO()
        for line in self.comments:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([format_cell(v) for v in row])
        return buf.getvalue()

    def write(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "CsvTable":
        comments = []
        body = []
        for line in text.splitlines():
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif line:
                body.append(line)
        reader = csv.reader(body)
        header = next(reader)
        return cls(header, [list(r) for r in reader], comments)


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:16]


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(value):
    if isinstance(value, Fraction):
        return float(value)
    if hasattr(value, "item"):
        return value.item()
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")
