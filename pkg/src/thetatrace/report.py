"""Audit report records and their JSON / CSV serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1

# provenance tags for expected values
TRIVIAL = "TRIVIAL"
DERIVED = "DERIVED"
PAPER = "PAPER"
AUDIT = "AUDIT"


def _num(x):
    """JSON-safe rendering of a number (complex as [re, im], non-finite as text)."""
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, complex):
        return [_num(x.real), _num(x.imag)]
    if isinstance(x, (int,)):
        return x
    try:
        f = float(x)
    except (TypeError, ValueError):
        return str(x)
    if math.isfinite(f):
        return f
    return repr(f)


@dataclass
class Check:
    name: str
    input: str
    expected: Any
    actual: Any
    residual: float
    tolerance: float | None
    provenance: str
    asserted: bool = True

    @property
    def passed(self) -> bool:
        if not self.asserted or self.tolerance is None:
            return True
        return bool(self.residual <= self.tolerance)

    def to_dict(self):
        return {
            "name": self.name,
            "input": self.input,
            "expected": _num(self.expected),
            "actual": _num(self.actual),
            "residual": _num(self.residual),
            "tolerance": _num(self.tolerance),
            "provenance": self.provenance,
            "asserted": self.asserted,
            "passed": self.passed,
        }


@dataclass
class AuditReport:
    """Named collection of checks plus free-form tables.

    ``audit=True`` marks a report whose residual rows are measurements
    rather than assertions; such a report is ``"audit"`` unless one of its
    asserted (self-consistency) rows fails.
    """

    name: str
    checks: list[Check] = field(default_factory=list)
    tables: dict[str, list[dict]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)
    audit: bool = False

    def add(self, name, input, expected, actual, residual, tolerance, provenance,
            asserted=True) -> Check:
        c = Check(name, str(input), expected, actual, float(residual),
                  None if tolerance is None else float(tolerance), provenance, asserted)
        self.checks.append(c)
        return c

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def status(self) -> str:
        if self.failed:
            return "fail"
        return "audit" if self.audit else "pass"

    @property
    def passed(self) -> bool:
        return not self.failed

    @property
    def worst_residual(self) -> float:
        vals = [c.residual for c in self.checks
                if c.asserted and c.tolerance is not None and math.isfinite(c.residual)]
        return max(vals) if vals else 0.0

    def to_dict(self, include_timestamps=True):
        meta = dict(self.metadata)
        if not include_timestamps:
            meta.pop("wall_time", None)
            meta.pop("timestamp", None)
        return {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "status": self.status,
            "worst_residual": _num(self.worst_residual),
            "checks": [c.to_dict() for c in self.checks],
            "tables": {k: [{kk: _num(vv) for kk, vv in row.items()} for row in rows]
                       for k, rows in self.tables.items()},
            "notes": list(self.notes),
            "metadata": {k: _num(v) if not isinstance(v, (str, list, dict)) else v
                         for k, v in meta.items()},
        }

    def to_json(self, include_timestamps=True) -> str:
        return json.dumps(self.to_dict(include_timestamps), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["report", "name", "input", "expected", "actual", "residual", "tolerance",
                "provenance", "asserted", "passed"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for c in self.checks:
            d = c.to_dict()
            w.writerow([self.name] + [json.dumps(d[k]) if isinstance(d[k], list) else d[k]
                                      for k in cols[1:]])
        return buf.getvalue()

    def summary_line(self) -> str:
        return (f"{self.name}: {self.status} ({len(self.checks)} checks, "
                f"worst residual {self.worst_residual:.3e})")
