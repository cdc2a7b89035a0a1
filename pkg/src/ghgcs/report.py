"""Verification records and their deterministic serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

from . import __version__


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    REPORTED_ONLY = "reported-only"
    DEGENERATE = "parameter-degenerate"


@dataclass
class CaseRecord:
    """One identity check: both sides, the measured error and its tolerance.

    ``status`` is derived from ``error <= tolerance`` unless the case is
    marked as reported-only or parameter-degenerate.
    """

    name: str
    tag: str
    params: dict
    lhs: float | complex
    rhs: float | complex
    error: float
    tolerance: float
    reported_only: bool = False
    degenerate: bool = False
    note: str = ""

    @property
    def status(self) -> Status:
        if self.degenerate:
            return Status.DEGENERATE
        if self.reported_only:
            return Status.REPORTED_ONLY
        if math.isfinite(self.error) and self.error <= self.tolerance:
            return Status.PASS
        return Status.FAIL

    @property
    def passed(self) -> bool:
        return self.status is not Status.FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tag": self.tag,
            "params": {k: _fmt(v) for k, v in sorted(self.params.items())},
            "lhs": _fmt(self.lhs),
            "rhs": _fmt(self.rhs),
            "error": _fmt(self.error),
            "tolerance": _fmt(self.tolerance),
            "status": self.status.value,
            "note": self.note,
        }


def _fmt(v):
    """Floats as 17-significant-digit strings so reports diff bit-stably."""
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, complex):
        return {"re": _fmt(v.real), "im": _fmt(v.imag)}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    try:
        return format(float(v), ".17g")
    except (TypeError, ValueError):
        return str(v)


@dataclass
class VerifyReport:
    suite: str
    cases: list[CaseRecord] = field(default_factory=list)
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def add(self, *records: CaseRecord):
        self.cases.extend(records)

    def sorted_cases(self) -> list[CaseRecord]:
        return sorted(self.cases, key=lambda c: c.name)

    def summary(self) -> dict:
        counts = {s.value: 0 for s in Status}
        for c in self.cases:
            counts[c.status.value] += 1
        counts["total"] = len(self.cases)
        return counts

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.cases)

    def body(self) -> dict:
        """Everything except the timestamp."""
        return {
            "suite": self.suite,
            "tool_version": self.version,
            "summary": self.summary(),
            "cases": [c.to_dict() for c in self.sorted_cases()],
        }

    def to_json(self) -> str:
        doc = {"timestamp": self.timestamp, **self.body()}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# suite={self.suite} tool_version={self.version} timestamp={self.timestamp}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["name", "tag", "status", "lhs", "rhs", "error", "tolerance", "params", "note"])
        for c in self.sorted_cases():
            d = c.to_dict()
            writer.writerow([
                d["name"], d["tag"], d["status"], json.dumps(d["lhs"]), json.dumps(d["rhs"]),
                d["error"], d["tolerance"], json.dumps(d["params"], sort_keys=True), d["note"],
            ])
        return buf.getvalue()
