"""Machine-readable verification reports shared by all campaigns.

A report is an append-only list of checked items with a pass/fail verdict
each; serialization is JSON with a stable field order so identical runs
produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

#: safety slack subtracted from the numeric (table) side before comparing
#: against rational campaign targets
TARGET_SLACK = 1e-9


def _num(v):
    if isinstance(v, Fraction):
        return float(v)
    return None if v is None else float(v)


@dataclass(frozen=True)
class ReportItem:
    description: str
    target: Optional[float]
    achieved: Optional[float]
    margin: Optional[float]
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "description": self.description,
            "target": self.target,
            "achieved": self.achieved,
            "margin": self.margin,
            "pass": self.passed,
            "detail": self.detail,
        }

    @staticmethod
    def from_dict(d: dict) -> "ReportItem":
        return ReportItem(description=d["description"], target=d["target"],
                          achieved=d["achieved"], margin=d["margin"],
                          passed=d["pass"], detail=d.get("detail", ""))


@dataclass
class VerificationReport:
    campaign: str
    config: dict = field(default_factory=dict)
    items: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, description: str, achieved, target, *,
              strict: bool = True, slack: float = TARGET_SLACK,
              detail: str = "") -> bool:
        """Record `achieved (>|>=) target`, slack subtracted from achieved."""
        a, t = _num(achieved), _num(target)
        m = (a - slack) - t
        ok = m > 0.0 if strict else m >= 0.0
        self.items.append(ReportItem(description, t, a, m, ok, detail))
        return ok

    def check_exact(self, description: str, achieved, target,
                    detail: str = "") -> bool:
        """Record an exact (rational) equality check, no tolerance."""
        ok = achieved == target
        self.items.append(ReportItem(
            description, _num(target), _num(achieved),
            0.0 if ok else None, ok,
            detail or f"exact: {achieved} vs {target}"))
        return ok

    def record(self, description: str, passed: bool, detail: str = "") -> bool:
        self.items.append(ReportItem(description, None, None, None,
                                     bool(passed), detail))
        return passed

    def note(self, text: str) -> None:
        """Log an auditable remark (e.g. an excluded degenerate mesh point)."""
        self.notes.append(text)

    @property
    def all_pass(self) -> bool:
        return all(it.passed for it in self.items)

    @property
    def failing(self) -> list:
        return [it for it in self.items if not it.passed]

    @property
    def min_margin(self) -> Optional[float]:
        ms = [it.margin for it in self.items if it.margin is not None]
        return min(ms) if ms else None

    @property
    def exit_code(self) -> int:
        return 0 if self.all_pass else 1

    def to_dict(self) -> dict:
        return {
            "campaign": self.campaign,
            "config": dict(sorted(self.config.items())),
            "summary": {
                "total": len(self.items),
                "passed": sum(it.passed for it in self.items),
                "failed": len(self.failing),
                "min_margin": self.min_margin,
                "all_pass": self.all_pass,
            },
            "items": [it.to_dict() for it in self.items],
            "notes": list(self.notes),
        }

    @staticmethod
    def from_dict(d: dict) -> "VerificationReport":
        rep = VerificationReport(campaign=d["campaign"],
                                 config=dict(d.get("config", {})))
        rep.items = [ReportItem.from_dict(it) for it in d["items"]]
        rep.notes = list(d.get("notes", []))
        return rep


def emit_report(report: VerificationReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, allow_nan=True)
    if fmt != "text":
        raise ValueError(f"unknown report format: {fmt}")
    lines = [f"campaign: {report.campaign}"]
    for k, v in sorted(report.config.items()):
        lines.append(f"  config {k} = {v}")
    for it in report.items:
        status = "PASS" if it.passed else "FAIL"
        extra = ""
        if it.achieved is not None and it.target is not None:
            extra = f"  achieved={it.achieved:.9g} target={it.target:.9g}"
            if it.margin is not None:
                extra += f" margin={it.margin:.3g}"
        lines.append(f"  [{status}] {it.description}{extra}")
        if it.detail:
            lines.append(f"         {it.detail}")
    for n in report.notes:
        lines.append(f"  note: {n}")
    d = report.to_dict()["summary"]
    lines.append(f"summary: {d['passed']}/{d['total']} passed"
                 + ("" if d["all_pass"] else f", {d['failed']} FAILED"))
    return "\n".join(lines)


def parse_report(text: str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(text))
