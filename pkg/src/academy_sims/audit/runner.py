"""Audit orchestration: reachability, provisioning, families in fixed order."""

from __future__ import annotations

from typing import Callable

import httpx

from .families import FAMILIES
from .probes import AuditContext, Fixture, check_reachable, provision
from .report import (
    NA_BY_DESIGN,
    PROBED_CATEGORIES,
    REPORT_ORDER,
    AuditReport,
    CategoryReport,
    now_stamp,
)


def default_client_factory(target: str) -> Callable[[], httpx.Client]:
    def factory() -> httpx.Client:
        return httpx.Client(base_url=target, timeout=30.0)

    return factory


def run_audit(
    target: str,
    fixture: Fixture | str,
    categories: list[str] | None = None,
    client_factory: Callable[[], httpx.Client] | None = None,
) -> AuditReport:
    """Attack `target` and report one verdict per OWASP category. Probes are
    destructive: only ever point this at a sacrificial seeded instance."""
    if isinstance(fixture, str):
        fixture = Fixture.load(fixture)
    wanted = set(categories) if categories is not None else set(PROBED_CATEGORIES)
    ctx = AuditContext(
        target=target,
        fixture=fixture,
        client_factory=client_factory or default_client_factory(target),
    )
    check_reachable(ctx)
    if wanted & set(PROBED_CATEGORIES):
        provision(ctx)

    reports: list[CategoryReport] = []
    try:
        for category_id in REPORT_ORDER:
            if category_id in NA_BY_DESIGN:
                if categories is None or category_id in wanted:
                    reports.append(CategoryReport(
                        category_id=category_id, verdict="NA",
                        justification=NA_BY_DESIGN[category_id],
                    ))
                continue
            if category_id not in wanted:
                continue
            probes = FAMILIES[category_id](ctx)
            verdict = "PASS" if all(p.passed for p in probes) else "FAIL"
            reports.append(CategoryReport(
                category_id=category_id, verdict=verdict, probes=tuple(probes),
            ))
    finally:
        ctx.close()
    return AuditReport(target=target, timestamp=now_stamp(),
                       categories=tuple(reports))
