"""Audit report model and renderers.

Probe semantics are inverted on purpose: a probe PASSES when the attack it
mounts is repelled.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

CATEGORY_NAMES = {
    "A1": "Injection",
    "A2": "Broken Authentication",
    "A3": "Sensitive Data Exposure",
    "A4": "XML External Entities (XXE)",
    "A5": "Broken Access Control",
    "A6": "Security Misconfiguration",
    "A7": "Cross-Site Scripting (XSS)",
    "A8": "Insecure Deserialization",
    "A10": "Insufficient Logging & Monitoring",
}

NA_BY_DESIGN = {
    "A4": "no XML is parsed anywhere in the service",
    "A8": "no native object graphs are deserialized; input is schema-checked "
          "JSON, CSV, or plain text",
}

PROBED_CATEGORIES = ("A1", "A2", "A3", "A5", "A6", "A7", "A10")
REPORT_ORDER = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A10")


@dataclass(frozen=True)
class ProbeResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CategoryReport:
    category_id: str
    verdict: str                      # PASS | FAIL | NA
    probes: tuple[ProbeResult, ...] = ()
    justification: str = ""

    @property
    def name(self) -> str:
        return CATEGORY_NAMES[self.category_id]


@dataclass(frozen=True)
class AuditReport:
    target: str
    timestamp: str
    categories: tuple[CategoryReport, ...]

    @property
    def passed(self) -> int:
        return sum(1 for c in self.categories if c.verdict == "PASS")

    @property
    def failed(self) -> int:
        return sum(1 for c in self.categories if c.verdict == "FAIL")

    @property
    def not_applicable(self) -> int:
        return sum(1 for c in self.categories if c.verdict == "NA")

    @property
    def probed(self) -> int:
        return self.passed + self.failed

    @property
    def exit_code(self) -> int:
        return 0 if self.failed == 0 else 1

    def category(self, category_id: str) -> CategoryReport:
        for c in self.categories:
            if c.category_id == category_id:
                return c
        raise KeyError(category_id)

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "timestamp": self.timestamp,
            "summary": {
                "passed": self.passed,
                "failed": self.failed,
                "notApplicable": self.not_applicable,
                "probed": self.probed,
                "exitCode": self.exit_code,
            },
            "categories": [
                {
                    "id": c.category_id,
                    "name": c.name,
                    "verdict": c.verdict,
                    "justification": c.justification,
                    "probes": [
                        {"name": p.name, "passed": p.passed, "detail": p.detail}
                        for p in c.probes
                    ],
                }
                for c in self.categories
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AuditReport":
        return cls(
            target=data["target"],
            timestamp=data["timestamp"],
            categories=tuple(
                CategoryReport(
                    category_id=c["id"],
                    verdict=c["verdict"],
                    justification=c.get("justification", ""),
                    probes=tuple(
                        ProbeResult(p["name"], p["passed"], p.get("detail", ""))
                        for p in c["probes"]
                    ),
                )
                for c in data["categories"]
            ),
        )


def now_stamp() -> str:
    return datetime.now(timezone.utc).isoformat()


def emit_report(report: AuditReport, format: str = "text") -> str:
    if format == "machine":
        return json.dumps(report.to_dict(), indent=2)
    if format != "text":
        raise ValueError(f"unknown report format: {format}")
    lines = [
        f"Security audit of {report.target} at {report.timestamp}",
        "(a probe PASSES when the attack it mounts is repelled)",
        "",
        f"{'category':<42} {'verdict':<8} probes",
        "-" * 72,
    ]
    for category in report.categories:
        label = f"{category.category_id} {category.name}"
        if category.verdict == "NA":
            lines.append(f"{label:<42} {'N/A':<8} by design: {category.justification}")
            continue
        done = sum(1 for p in category.probes if p.passed)
        lines.append(f"{label:<42} {category.verdict:<8} {done}/{len(category.probes)}")
        for probe in category.probes:
            if not probe.passed:
                lines.append(f"    FAILED  {probe.name}: {probe.detail}")
    lines.append("-" * 72)
    lines.append(
        f"{report.passed}/{report.probed} categories PASS, "
        f"{report.not_applicable} N/A by design"
    )
    return "\n".join(lines)
