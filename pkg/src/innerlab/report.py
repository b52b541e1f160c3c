"""Check records and reproducible report payloads.

Reports are deterministic: identical inputs and seed produce byte-identical
JSON (keys are sorted and no timestamps are embedded).  Every failing check
carries a witness.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

SCHEMA_VERSION = "1"

_STATUSES = ("pass", "fail", "info")


def _native(v):
    """Coerce a value into JSON-native types (complex becomes [re, im])."""
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_native(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _native(x) for k, x in v.items()}
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return str(v)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str
    value: object = None
    gate: object = None
    witness: object = None

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"status must be one of {_STATUSES}")
        if self.status == "fail" and self.witness is None:
            raise ValueError("a failing check must carry a witness")
        object.__setattr__(self, "value", _native(self.value))
        object.__setattr__(self, "gate", _native(self.gate))
        object.__setattr__(self, "witness", _native(self.witness))

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "value": self.value,
            "gate": self.gate,
            "witness": self.witness,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CheckRecord":
        return cls(doc["name"], doc["status"], doc.get("value"),
                   doc.get("gate"), doc.get("witness"))


@dataclass(frozen=True)
class Report:
    suite: str
    config: dict
    seed: int
    records: Tuple[CheckRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        object.__setattr__(self, "config", _native(dict(self.config)))

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "info": 0}
        for r in self.records:
            counts[r.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "seed": self.seed,
            "records": [r.to_json_dict() for r in self.records],
            "summary": self.summary,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Report":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {doc.get('schema_version')!r}")
        return cls(
            doc["suite"],
            doc.get("config", {}),
            int(doc.get("seed", 0)),
            tuple(CheckRecord.from_json_dict(r) for r in doc.get("records", [])),
        )

    @classmethod
    def from_json_str(cls, payload: str) -> "Report":
        return cls.from_json_dict(json.loads(payload))

    def to_csv_str(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["name", "status", "value", "gate", "witness"])
        for r in self.records:
            writer.writerow([
                r.name, r.status,
                json.dumps(r.value, sort_keys=True),
                json.dumps(r.gate, sort_keys=True),
                json.dumps(r.witness, sort_keys=True),
            ])
        return buf.getvalue()


def export(report: Report, fmt: str, path) -> Path:
    """Write the report as schema-versioned JSON or CSV; returns the path."""
    path = Path(path)
    if fmt == "json":
        path.write_text(report.to_json_str())
    elif fmt == "csv":
        path.write_text(report.to_csv_str())
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return path
