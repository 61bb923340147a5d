from .probes import AuditContext, Fixture
from .report import AuditReport, CategoryReport, ProbeResult, emit_report
from .runner import run_audit

__all__ = ["AuditContext", "AuditReport", "CategoryReport", "Fixture",
           "ProbeResult", "emit_report", "run_audit"]
