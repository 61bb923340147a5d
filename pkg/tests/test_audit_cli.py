import json

import pytest

from academy_sims.api import ROUTES, create_app
from academy_sims.audit import AuditReport, Fixture, emit_report, run_audit
from academy_sims.audit.probes import NO_TEXT_PARAM_ROUTES, injection_points
from academy_sims.errors import FixtureInvalid, TargetUnreachable
from academy_sims.runtime import build_runtime

from conftest import make_config, make_harness
from scenario import (
    CADET_NPA,
    COURSE_CODE,
    DEPARTMENT,
    FIXTURE_EMAILS,
    FIXTURE_PASSWORDS,
    SESSION_YEAR,
    run_walkthrough,
    seed_for_walkthrough,
)


def fixture_for(runtime) -> Fixture:
    credentials = {
        role: {"email": FIXTURE_EMAILS[role], "password": FIXTURE_PASSWORDS[role]}
        for role in ("admin", "hod", "lecturer")
    }
    credentials["cadet"] = {
        "email": FIXTURE_EMAILS["cadet"],
        "password": FIXTURE_PASSWORDS["cadet"],
        "npaNumber": CADET_NPA,
    }
    return Fixture.from_dict({
        "credentials": credentials,
        "storagePath": runtime.config.storage_path,
        "department": DEPARTMENT,
        "courseCode": COURSE_CODE,
        "sessionYear": SESSION_YEAR,
    })


def build_target(tmp_path, clock, **config_overrides):
    """A scenario-seeded in-process instance plus its client factory."""
    runtime = build_runtime(make_config(tmp_path, **config_overrides), clock)
    seed_for_walkthrough(runtime)
    harness = make_harness(runtime)
    run_walkthrough(harness)
    harness.client.close()
    app = create_app(runtime)

    def client_factory():
        from starlette.testclient import TestClient

        return TestClient(app, raise_server_exceptions=False,
                          base_url="http://audit-target")

    return runtime, client_factory


@pytest.fixture
def healthy_target(tmp_path, clock):
    runtime, factory = build_target(tmp_path, clock)
    yield runtime, factory
    runtime.close()


def test_healthy_instance_passes_every_category(healthy_target):
    runtime, factory = healthy_target
    report = run_audit("http://audit-target", fixture_for(runtime),
                       client_factory=factory)
    verdicts = {c.category_id: c.verdict for c in report.categories}
    assert verdicts == {
        "A1": "PASS", "A2": "PASS", "A3": "PASS", "A4": "NA", "A5": "PASS",
        "A6": "PASS", "A7": "PASS", "A8": "NA", "A10": "PASS",
    }
    assert report.exit_code == 0
    assert report.probed == 7 and report.passed == 7 and report.not_applicable == 2


def test_audit_is_idempotent(healthy_target):
    runtime, factory = healthy_target
    fixture = fixture_for(runtime)
    first = run_audit("http://audit-target", fixture, client_factory=factory)
    second = run_audit("http://audit-target", fixture, client_factory=factory)
    vector = lambda r: [(c.category_id, c.verdict) for c in r.categories]
    assert vector(first) == vector(second)


def test_insecure_demo_fails_the_csrf_probe(tmp_path, clock):
    runtime, factory = build_target(tmp_path, clock, insecure_demo=True)
    try:
        report = run_audit("http://audit-target", fixture_for(runtime),
                           client_factory=factory)
        assert report.category("A5").verdict == "FAIL"
        assert report.exit_code != 0
        failing = [p.name for p in report.category("A5").probes if not p.passed]
        assert any("CSRF" in name for name in failing)
    finally:
        runtime.close()


@pytest.mark.parametrize("weakness,category", [
    ("a1", "A1"), ("a2", "A2"), ("a3", "A3"), ("a5", "A5"),
    ("a6", "A6"), ("a7", "A7"), ("a10", "A10"),
])
def test_each_probe_family_detects_its_fault(tmp_path, clock, weakness, category):
    """Probe-validity: a deliberately weakened instance makes exactly the
    matching family fail, so no family is vacuous."""
    runtime, factory = build_target(tmp_path, clock,
                                    weaken=frozenset({weakness}))
    try:
        report = run_audit("http://audit-target", fixture_for(runtime),
                           categories=[category], client_factory=factory)
        assert report.category(category).verdict == "FAIL", emit_report(report)
        assert report.exit_code != 0
    finally:
        runtime.close()


def test_category_filter_limits_the_run(healthy_target):
    runtime, factory = healthy_target
    report = run_audit("http://audit-target", fixture_for(runtime),
                       categories=["A6"], client_factory=factory)
    assert [c.category_id for c in report.categories] == ["A6"]


def test_empty_category_set_renders_header_only(healthy_target):
    runtime, factory = healthy_target
    report = run_audit("http://audit-target", fixture_for(runtime),
                       categories=[], client_factory=factory)
    assert report.categories == ()
    text = emit_report(report)
    assert "Security audit" in text
    assert "0/0 categories PASS" in text


def test_text_report_summarizes_pass_line(healthy_target):
    runtime, factory = healthy_target
    report = run_audit("http://audit-target", fixture_for(runtime),
                       client_factory=factory)
    text = emit_report(report, "text")
    assert "7/7 categories PASS, 2 N/A by design" in text
    assert "N/A" in text and "by design" in text


def test_machine_report_round_trips(healthy_target):
    runtime, factory = healthy_target
    report = run_audit("http://audit-target", fixture_for(runtime),
                       categories=["A6"], client_factory=factory)
    blob = emit_report(report, "machine")
    parsed = AuditReport.from_dict(json.loads(blob))
    assert parsed == report
    assert json.loads(blob)["summary"]["exitCode"] == report.exit_code


def test_unreachable_target(tmp_path, clock, healthy_target):
    runtime, _ = healthy_target
    with pytest.raises(TargetUnreachable):
        run_audit("http://127.0.0.1:9", fixture_for(runtime))


def test_fixture_validation():
    with pytest.raises(FixtureInvalid):
        Fixture.from_dict({"credentials": {}})
    with pytest.raises(FixtureInvalid):
        Fixture.from_dict({
            "credentials": {"admin": {"email": "a@b.co", "password": "x"}},
            "storagePath": "p", "department": "d", "courseCode": "c",
            "sessionYear": 2019,
        })


def test_every_route_is_covered_by_injection_recipes_or_declared_exempt():
    covered = {point.route for point in injection_points()}
    declared_no_params = set(NO_TEXT_PARAM_ROUTES)
    all_routes = {f"{spec.method} {spec.path}" for spec in ROUTES}
    assert covered <= all_routes
    assert declared_no_params <= all_routes
    missing = all_routes - covered - declared_no_params
    assert missing == set()
    assert not (covered & declared_no_params)
