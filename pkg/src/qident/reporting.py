"""Verification reports and the versioned report file (JSON / CSV)."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import mpmath

from .qkernel import ApproxScalar, ExactScalar

SCHEMA_VERSION = "1"

CSV_COLUMNS = [
    "identity_id",
    "n",
    "params",
    "mode",
    "lhs",
    "rhs",
    "abs_err",
    "rel_err",
    "pass",
    "degenerate",
    "truncation_terms",
    "quadrature_nodes",
]


@dataclass
class VerificationReport:
    identity_id: str
    params: dict
    n: Optional[int]
    mode: str  # "exact" | "approx"
    lhs: str
    rhs: str
    abs_err: Optional[float]
    rel_err: Optional[float]
    passed: bool
    degenerate: bool = False
    truncation_terms: Optional[int] = None
    quadrature_nodes: Optional[int] = None
    note: str = ""

    def row(self) -> list:
        return [
            self.identity_id,
            "" if self.n is None else self.n,
            ";".join(f"{k}={v}" for k, v in sorted(self.params.items())),
            self.mode,
            self.lhs,
            self.rhs,
            _err_str(self.abs_err),
            _err_str(self.rel_err),
            str(self.passed).lower(),
            str(self.degenerate).lower(),
            "" if self.truncation_terms is None else self.truncation_terms,
            "" if self.quadrature_nodes is None else self.quadrature_nodes,
        ]


def _err_str(e: Optional[float]) -> str:
    if e is None:
        return ""
    return repr(float(e))


def value_str(v) -> str:
    if isinstance(v, ExactScalar):
        return str(v)
    if isinstance(v, ApproxScalar):
        return str(v)
    return str(v)


def compare_exact(lhs: ExactScalar, rhs: ExactScalar):
    """(passed, abs_err, rel_err) under strict equality."""
    if lhs == rhs:
        return True, 0.0, 0.0
    diff = lhs - rhs
    abs_err = diff.abs_upper()
    scale = max(1.0, rhs.abs_upper())
    return False, abs_err, abs_err / scale


def compare_approx(lhs, rhs, eps: float):
    """(passed, abs_err, rel_err) with pass iff rel_err <= eps.

    rel_err is measured against max(1, |rhs|), matching the certified-error
    convention used by the evaluators.
    """
    bits = 64
    for v in (lhs, rhs):
        if isinstance(v, ApproxScalar):
            bits = max(bits, v.precision_bits)
    la = lhs.value if isinstance(lhs, ApproxScalar) else lhs
    ra = rhs.value if isinstance(rhs, ApproxScalar) else rhs
    with mpmath.mp.workprec(bits + 10):
        la = mpmath.mpc(la)
        ra = mpmath.mpc(ra)
        abs_err = float(abs(la - ra))
        rel_err = abs_err / max(1.0, float(abs(ra)))
    return rel_err <= eps, abs_err, rel_err


@dataclass
class ReportFile:
    """Versioned container for verification runs; serializes deterministically."""

    tool_version: str
    config: dict
    entries: list = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def add(self, report: VerificationReport):
        self.entries.append(report)

    @property
    def summary(self) -> dict:
        total = len(self.entries)
        passed = sum(1 for e in self.entries if e.passed)
        degenerate = sum(1 for e in self.entries if e.degenerate)
        return {
            "total": total,
            "passed": passed,
            "failed": total - passed,
            "degenerate": degenerate,
        }

    @property
    def all_passed(self) -> bool:
        return self.summary["failed"] == 0

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "config": self.config,
            "reports": [asdict(e) for e in self.entries],
            "summary": self.summary,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")  # RFC 4180
        writer.writerow(CSV_COLUMNS)
        for e in self.entries:
            writer.writerow(e.row())
        return buf.getvalue()

    @staticmethod
    def from_json(text: str) -> "ReportFile":
        payload = json.loads(text)
        rf = ReportFile(
            tool_version=payload["tool_version"],
            config=payload["config"],
            schema_version=payload["schema_version"],
        )
        for e in payload["reports"]:
            rf.add(VerificationReport(**e))
        return rf
