"""
Reports

Table rows and verification reports, plus the JSON/CSV writers shared by
the CLI and run_all.py. JSON output is byte-stable: sorted keys, two-space
indent, floats at 12 significant digits.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from shared.utils import get_timestamp

FLOAT_DIGITS = 12


class Status(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    ERRATUM = "ERRATUM"
    IMPOSSIBLE = "IMPOSSIBLE"


def normalize(payload: Any) -> Any:
    """Round floats to 12 significant digits and render Fractions as "num/den"."""
    if isinstance(payload, bool) or payload is None:
        return payload
    if isinstance(payload, float):
        if math.isnan(payload) or math.isinf(payload):
            return str(payload)
        return float(f"{payload:.{FLOAT_DIGITS}g}")
    if isinstance(payload, Fraction):
        return f"{payload.numerator}/{payload.denominator}"
    if isinstance(payload, Enum):
        return payload.value
    if isinstance(payload, dict):
        return {str(k): normalize(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [normalize(v) for v in payload]
    if hasattr(payload, "item"):
        return normalize(payload.item())
    return payload


def to_json_text(payload: Any) -> str:
    return json.dumps(normalize(payload), sort_keys=True, indent=2)


def to_csv_text(rows: list[dict[str, Any]], fieldnames: list[str] | None = None) -> str:
    buffer = io.StringIO()
    if not rows and not fieldnames:
        return ""
    fieldnames = fieldnames or list(rows[0].keys())
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: normalize(v) for k, v in row.items()})
    return buffer.getvalue()


@dataclass
class TableRow:
    """One table cell: printed value, recomputed value and verdict."""

    table_id: str
    column: str
    q: int
    collection: str
    base: str
    expected: float | None
    computed: float | None
    status: Status
    note: str = ""

    @property
    def abs_error(self) -> float | None:
        if self.expected is None or self.computed is None:
            return None
        return abs(self.computed - self.expected)

    def to_json(self) -> dict[str, Any]:
        return {
            "table": self.table_id,
            "column": self.column,
            "q": self.q,
            "collection": self.collection,
            "base": self.base,
            "expected": self.expected,
            "computed": self.computed,
            "abs_error": self.abs_error,
            "status": self.status.value,
            "note": self.note,
        }


TABLE_CSV_FIELDS = [
    "table", "column", "q", "collection", "base", "expected", "computed", "abs_error", "status", "note",
]


@dataclass
class FailureRecord:
    """
    A failing instance, serialized so replay_failure can rerun it alone.

    Attributes:
        kind: Check kind ("compare", "bracket", "oracle", ...)
        instance: Everything the check needs (q, words as digit strings, ...)
        reason: What went wrong
    """

    kind: str
    instance: dict[str, Any]
    reason: str

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "instance": self.instance, "reason": self.reason}


@dataclass
class VerificationReport:
    """Outcome of one theorem suite."""

    theorem: str
    description: str
    universe: str
    parameters: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    instances_tested: int = 0
    failures: list[FailureRecord] = field(default_factory=list)
    observations: list[dict[str, Any]] = field(default_factory=list)
    wall_time: float = 0.0
    timestamp: str = field(default_factory=get_timestamp)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, kind: str, instance: dict[str, Any], reason: str) -> None:
        self.failures.append(FailureRecord(kind, instance, reason))

    def observe(self, **observation: Any) -> None:
        self.observations.append(observation)

    def to_json(self, timing: bool = True) -> dict[str, Any]:
        """Report as a dict; timing=False drops wall time and timestamp for byte-stable output."""
        payload = {
            "theorem": self.theorem,
            "description": self.description,
            "universe": self.universe,
            "parameters": self.parameters,
            "seed": self.seed,
            "instances_tested": self.instances_tested,
            "passed": self.passed,
            "failures": [f.to_json() for f in self.failures],
            "observations": self.observations,
        }
        if timing:
            payload["wall_time"] = self.wall_time
            payload["timestamp"] = self.timestamp
        return payload

    def csv_rows(self) -> list[dict[str, Any]]:
        """One row per failure, or a single summary row when clean."""
        if not self.failures:
            return [{
                "theorem": self.theorem, "instances_tested": self.instances_tested,
                "passed": True, "kind": "", "instance": "", "reason": "",
            }]
        return [
            {
                "theorem": self.theorem,
                "instances_tested": self.instances_tested,
                "passed": False,
                "kind": f.kind,
                "instance": json.dumps(normalize(f.instance), sort_keys=True),
                "reason": f.reason,
            }
            for f in self.failures
        ]
