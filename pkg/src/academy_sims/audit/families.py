"""The seven probed category families. Each returns a list of ProbeResult;
a probe passes when the attack is repelled."""

from __future__ import annotations

import secrets
from typing import Callable

from ..access_control import PERMISSION_MATRIX
from ..api.app import SESSION_COOKIE
from ..api.routes import ROUTES, SESSION
from ..domain import Role
from .probes import (
    INJECTION_PAYLOADS,
    LEAK_MARKERS,
    XSS_PAYLOAD,
    AuditContext,
    injection_points,
)
from .report import ProbeResult


def _leaks(text: str) -> str | None:
    lowered = text.lower()
    for marker in LEAK_MARKERS:
        if marker.lower() in lowered:
            return marker
    return None


# ---------------------------------------------------------------------------
# A1 — injection
# ---------------------------------------------------------------------------


def probe_a1(ctx: AuditContext) -> list[ProbeResult]:
    results = []

    # Login bypass attempts on all three principal stores. Ghost emails keep
    # the throttle away from both the fixture accounts and the probe itself.
    bypasses = []
    for realm in ("admin", "staff", "cadet"):
        for payload in INJECTION_PAYLOADS:
            ghost = f"ghost.{secrets.token_hex(6)}@academy.example"
            for body in (
                {"email": payload, "password": payload},
                {"email": ghost, "password": payload},
            ):
                response = ctx.anon().post(f"/api/{realm}/login", json=body)
                if response.status_code == 200:
                    bypasses.append((realm, payload))
                elif response.status_code >= 500 and _leaks(response.text):
                    bypasses.append((realm, f"5xx leak on {payload!r}"))
    results.append(ProbeResult(
        "login accepts no injection payload", not bypasses, str(bypasses[:3])))

    # every text parameter of every route
    offenders = []
    for point in injection_points():
        client = ctx.as_role(point.role) if point.role else None
        for payload in INJECTION_PAYLOADS:
            request = point.build(ctx, payload)
            method = request.pop("method")
            path = request.pop("path")
            if client is None:
                response = ctx.anon().request(method, path, **request)
            else:
                response = client.request(method, path, **request)
            if response.status_code >= 500:
                marker = _leaks(response.text)
                if marker:
                    offenders.append((point.route, point.field, payload, marker))
                    continue
                offenders.append((point.route, point.field, payload, "5xx"))
    results.append(ProbeResult(
        "no route turns a payload into a 5xx or leaks storage internals",
        not offenders, str(offenders[:3])))

    # the data the payloads tried to destroy is intact
    staff_rows = ctx.storage_query("SELECT COUNT(*) AS n FROM staff")
    cadet_rows = ctx.storage_query("SELECT COUNT(*) AS n FROM cadets")
    intact = staff_rows[0]["n"] >= 2 and cadet_rows[0]["n"] >= 1
    results.append(ProbeResult(
        "staff and cadet tables survive the payload corpus", intact,
        f"staff={staff_rows[0]['n']} cadets={cadet_rows[0]['n']}"))
    return results


# ---------------------------------------------------------------------------
# A2 — broken authentication
# ---------------------------------------------------------------------------


def probe_a2(ctx: AuditContext) -> list[ProbeResult]:
    results = []
    ghost = f"stuffing.{secrets.token_hex(4)}@academy.example"

    statuses = []
    client = ctx.anon()
    for _ in range(8):
        response = client.post("/api/admin/login",
                               json={"email": ghost, "password": "wrongpw99"})
        statuses.append(response.status_code)
        if response.status_code == 429:
            break
    throttled_at = statuses.index(429) + 1 if 429 in statuses else None
    results.append(ProbeResult(
        "credential stuffing hits the throttle at the failure threshold",
        throttled_at is not None and throttled_at <= 6,
        f"statuses={statuses}"))

    planted = secrets.token_urlsafe(32)
    fixation = ctx.anon()
    fixation.cookies.set(SESSION_COOKIE, planted)
    cred = ctx.fixture.credentials["cadet"]
    login = fixation.post("/api/cadet/login",
                          json={"email": cred.email, "password": cred.password})
    issued = login.cookies.get(SESSION_COOKIE)
    rotated = login.status_code == 200 and issued and issued != planted
    probe = ctx.anon()
    probe.cookies.set(SESSION_COOKIE, planted)
    promoted = probe.get("/api/me").status_code == 200
    results.append(ProbeResult(
        "login rotates the session token; a fixated cookie is never promoted",
        bool(rotated) and not promoted,
        f"rotated={bool(rotated)} promoted={promoted}"))

    accepted = 0
    guesser = ctx.anon()
    for _ in range(200):
        guesser.cookies.clear()
        guesser.cookies.set(SESSION_COOKIE, secrets.token_urlsafe(32))
        if guesser.get("/api/me").status_code != 401:
            accepted += 1
    results.append(ProbeResult(
        "random session tokens are never accepted", accepted == 0,
        f"accepted={accepted}/200"))
    return results


# ---------------------------------------------------------------------------
# A3 — sensitive data exposure
# ---------------------------------------------------------------------------


def probe_a3(ctx: AuditContext) -> list[ProbeResult]:
    secrets_to_find = [c.password for c in ctx.fixture.credentials.values()]
    if ctx.provisioned.cadet_b:
        secrets_to_find.append(ctx.provisioned.cadet_b.password)

    exposures = []
    collected: list[bytes] = []
    for role in ("admin", "hod", "lecturer", "cadet"):
        client = ctx.as_role(role)
        for spec in ROUTES:
            if spec.method != "GET":
                continue
            path = (spec.path
                    .replace("{staff_id}", str(ctx.provisioned.lecturer_id))
                    .replace("{cadet_id}", str(ctx.provisioned.cadet_a_id))
                    .replace("{course_code}", ctx.fixture.course_code)
                    .replace("{material_id}", str(ctx.provisioned.material_id)))
            collected.append(client.get(path).content)
    for blob in collected:
        for candidate in secrets_to_find:
            if candidate.encode() in blob:
                exposures.append(candidate[:4] + "...")
    results = [ProbeResult(
        "no authenticated response contains a fixture plaintext password",
        not exposures, str(exposures[:3]))]

    storage = ctx.read_storage_bytes()
    in_storage = [c[:4] + "..." for c in secrets_to_find if c.encode() in storage]
    results.append(ProbeResult(
        "the storage file contains no fixture plaintext password",
        not in_storage, str(in_storage[:3])))

    hashes = ctx.storage_query("SELECT password_hash FROM admins")
    hashed_properly = all(
        row["password_hash"].startswith("$argon2id$") for row in hashes
    )
    results.append(ProbeResult(
        "stored credentials are key-derivation hashes, not reversible text",
        hashed_properly, ""))
    return results


# ---------------------------------------------------------------------------
# A5 — broken access control (+ CSRF, folded in since 2017)
# ---------------------------------------------------------------------------


def _benign_request(ctx: AuditContext, spec) -> dict:
    """A request that an in-scope, authorized caller could legitimately make."""
    p = ctx.provisioned
    path = (spec.path
            .replace("{staff_id}", str(p.lecturer_id))
            .replace("{cadet_id}", str(p.cadet_a_id))
            .replace("{course_code}", ctx.fixture.course_code)
            .replace("{material_id}", str(p.material_id)))
    kwargs: dict = {"method": spec.method, "path": path}
    if spec.method in {"POST", "PATCH", "DELETE"}:
        body: dict | None = {}
        if spec.path == "/api/admin/staff-pins":
            body = {"department": ctx.fixture.department, "count": 1}
        elif spec.path == "/api/admin/events":
            body = {"title": "audit", "body": "audit", "eventDate": "2019-01-01"}
        elif spec.path == "/api/hod/cadet-pins":
            body = {"count": 1}
        elif spec.path == "/api/hod/npa-roster":
            return {**kwargs, "content": b"NPA/09/09/00912",
                    "headers": {"Content-Type": "text/plain"}}
        elif spec.path == "/api/hod/courses":
            body = {"courseCode": f"AUD-{secrets.token_hex(2).upper()}",
                    "courseTitle": "audit", "level": 500, "unit": 1,
                    "semester": "first", "year": ctx.fixture.session_year}
        elif spec.path == "/api/hod/courses/{course_code}":
            kwargs["path"] = f"/api/hod/courses/{p.disposable_course}"
            body = {"courseTitle": "audit"} if spec.method == "PATCH" else None
        elif spec.path == "/api/hod/assignments":
            body = {"courseCode": ctx.fixture.course_code,
                    "staffId": p.lecturer_id,
                    "sessionYear": ctx.fixture.session_year}
        elif spec.path == "/api/hod/registration-window":
            body = {"open": True}
        elif spec.path == "/api/lecturer/courses/{course_code}/scores":
            return {**kwargs,
                    "content": b"npa_number,total\nNPA/00/00/00000,50\n",
                    "headers": {"Content-Type": "text/csv"}}
        elif spec.path == "/api/lecturer/courses/{course_code}/materials":
            return {**kwargs, "files": {"file": ("audit.pdf", b"x", "application/pdf")}}
        elif spec.path == "/api/cadet/registrations":
            body = {"courseCodes": []}
        elif spec.path == "/api/me/password":
            body = {"currentPassword": "definitely-wrong-9", "newPassword": "probepw99"}
        elif spec.path == "/api/me":
            body = {}
        if body is not None:
            kwargs["json"] = body
    return kwargs


def probe_a5(ctx: AuditContext) -> list[ProbeResult]:
    results = []

    deviations = []
    action_routes = [s for s in ROUTES if s.auth == SESSION and s.action is not None]
    for role in ("admin", "hod", "lecturer", "cadet"):
        client = ctx.as_role(role)
        granted = PERMISSION_MATRIX[Role(role)]
        for spec in action_routes:
            request = _benign_request(ctx, spec)
            method = request.pop("method")
            path = request.pop("path")
            response = client.request(method, path, **request)
            expect_denied = spec.action not in granted
            denied = response.status_code == 403
            if expect_denied != denied:
                deviations.append((role, f"{spec.method} {spec.path}",
                                   response.status_code))
    results.append(ProbeResult(
        "live role access matches the permission matrix exactly",
        not deviations, str(deviations[:5])))

    anon_401 = []
    anon = ctx.anon()
    for spec in ROUTES:
        if spec.auth != SESSION:
            continue
        request = _benign_request(ctx, spec)
        method = request.pop("method")
        path = request.pop("path")
        response = anon.request(method, path, **request)
        if response.status_code != 401:
            anon_401.append((f"{spec.method} {spec.path}", response.status_code))
    results.append(ProbeResult(
        "every session route rejects anonymous callers with 401",
        not anon_401, str(anon_401[:5])))

    # horizontal escalation
    horizontal = []
    cadet_b = ctx.login_with("cadet", ctx.provisioned.cadet_b.email,
                             ctx.provisioned.cadet_b.password)
    download = cadet_b.get(f"/api/cadet/materials/{ctx.provisioned.material_id}")
    if download.status_code != 403:
        horizontal.append(("unregistered cadet downloaded material",
                           download.status_code))
    own_results = cadet_b.get("/api/cadet/results")
    fixture_npa = ctx.fixture.credentials["cadet"].npa_number
    if fixture_npa and fixture_npa in own_results.text:
        horizontal.append(("cadet B sees cadet A's rows", 200))
    edit = cadet_b.patch(f"/api/hod/cadets/{ctx.provisioned.cadet_a_id}",
                         json={"address": "hijacked"})
    if edit.status_code != 403:
        horizontal.append(("cadet edited another cadet", edit.status_code))
    cadet_b.close()

    lecturer = ctx.as_role("lecturer")
    staff_edit = lecturer.patch(f"/api/admin/staff/{ctx.provisioned.lecturer_id}",
                                json={"designation": "hod"})
    if staff_edit.status_code != 403:
        horizontal.append(("lecturer edited staff records", staff_edit.status_code))
    results.append(ProbeResult(
        "horizontal escalation attempts are denied",
        not horizontal, str(horizontal)))

    # CSRF enforcement on every state-changing session route
    csrf_holes = []
    for role in ("admin", "hod", "lecturer", "cadet"):
        client = ctx.as_role(role)
        for spec in ROUTES:
            if not (spec.auth == SESSION and spec.state_changing):
                continue
            request = _benign_request(ctx, spec)
            method = request.pop("method")
            path = request.pop("path")
            headers = dict(request.pop("headers", {}) or {})
            for attempt, token in (("omitted", None),
                                   ("mismatched", secrets.token_urlsafe(32))):
                sent = dict(headers)
                if token is not None:
                    sent["X-CSRF-Token"] = token
                response = client.client.request(method, path, headers=sent, **request)
                if response.status_code != 403:
                    csrf_holes.append((role, f"{spec.method} {spec.path}",
                                       attempt, response.status_code))
    results.append(ProbeResult(
        "state-changing requests without a valid CSRF token are rejected",
        not csrf_holes, str(csrf_holes[:5])))
    return results


# ---------------------------------------------------------------------------
# A6 — security misconfiguration
# ---------------------------------------------------------------------------


REQUIRED_HEADERS = {
    "x-content-type-options": "nosniff",
    "x-frame-options": "DENY",
    "content-security-policy": "default-src 'none'",
}


def probe_a6(ctx: AuditContext) -> list[ProbeResult]:
    results = []
    anon = ctx.anon()
    samples = [
        anon.get("/health"),
        anon.get("/api/me"),
        anon.get("/no-such-route"),
        anon.post("/api/admin/login", json={}),
        ctx.as_role("admin").get("/api/admin/staff"),
    ]
    missing = []
    for response in samples:
        for name, value in REQUIRED_HEADERS.items():
            if response.headers.get(name) != value:
                missing.append((str(response.request.url), name))
        content_type = response.headers.get("content-type", "")
        if "charset=utf-8" not in content_type:
            missing.append((str(response.request.url), "charset"))
    results.append(ProbeResult(
        "all responses carry the hardening headers and UTF-8 content types",
        not missing, str(missing[:5])))

    verbose = []
    provocations = [
        anon.post("/api/admin/login", content=b"{not json",
                  headers={"Content-Type": "application/json"}),
        anon.post("/api/admin/login", content=b"email=x",
                  headers={"Content-Type": "text/plain"}),
        anon.request("DELETE", "/health"),
        ctx.as_role("hod").post("/api/hod/npa-roster", content=b"\xff\xfe\x00bad",
                                headers={"Content-Type": "text/plain"}),
    ]
    for response in provocations:
        marker = _leaks(response.text)
        if marker:
            verbose.append((str(response.request.url), response.status_code, marker))
        if response.status_code >= 500 and response.status_code != 500:
            verbose.append((str(response.request.url), response.status_code, "odd 5xx"))
    results.append(ProbeResult(
        "malformed input produces sanitized errors, never internals",
        not verbose, str(verbose[:5])))
    return results


# ---------------------------------------------------------------------------
# A7 — cross-site scripting
# ---------------------------------------------------------------------------


def probe_a7(ctx: AuditContext) -> list[ProbeResult]:
    admin = ctx.as_role("admin")
    hod = ctx.as_role("hod")
    cadet = ctx.as_role("cadet")

    # store the payload in every writable text surface we can reach
    admin.post("/api/admin/events", json={
        "title": XSS_PAYLOAD, "body": XSS_PAYLOAD, "eventDate": "2019-01-01"})
    hod.post("/api/hod/courses", json={
        "courseCode": f"XSS-{secrets.token_hex(2).upper()}",
        "courseTitle": XSS_PAYLOAD, "level": 500, "unit": 1,
        "semester": "first", "year": ctx.fixture.session_year})
    cadet.patch("/api/me", json={"address": XSS_PAYLOAD})

    reserved_as_html = []
    surfaces = [
        (admin, "/api/events"),
        (admin, "/api/admin/events"),
        (hod, "/api/hod/courses"),
        (cadet, "/api/me"),
        (hod, "/api/hod/cadets"),
    ]
    for client, path in surfaces:
        response = client.get(path)
        content_type = response.headers.get("content-type", "")
        if "text/html" in content_type and XSS_PAYLOAD in response.text:
            reserved_as_html.append((path, content_type))
        if "application/json" not in content_type:
            reserved_as_html.append((path, f"non-JSON: {content_type}"))
    return [ProbeResult(
        "stored script payloads are never re-served as interpretable HTML",
        not reserved_as_html, str(reserved_as_html[:5]))]


# ---------------------------------------------------------------------------
# A10 — insufficient logging
# ---------------------------------------------------------------------------

SENTINELS = ("login_success", "login_failure", "pins_created",
             "score_uploaded", "logout")


def probe_a10(ctx: AuditContext) -> list[ProbeResult]:
    def counts() -> dict[str, int]:
        rows = ctx.storage_query(
            "SELECT action, COUNT(*) AS n FROM audit_records GROUP BY action")
        return {row["action"]: row["n"] for row in rows}

    before = counts()

    cred = ctx.fixture.credentials["hod"]
    sentinel = ctx.login_with("staff", cred.email, cred.password)   # login_success
    ctx.anon().post("/api/staff/login", json={
        "email": cred.email, "password": "definitely-wrong-9"})     # login_failure
    sentinel.post("/api/hod/cadet-pins", json={"count": 1})         # pins_created
    sentinel.post(
        f"/api/lecturer/courses/{ctx.fixture.course_code}/scores",
        content=f"npa_number,total\n{ctx.fixture.credentials['cadet'].npa_number},68\n".encode(),
        headers={"Content-Type": "text/csv"})                       # score_uploaded
    sentinel.post("/api/logout")                                    # logout
    sentinel.close()

    after = counts()
    unlogged = [s for s in SENTINELS if after.get(s, 0) <= before.get(s, 0)]
    result = [ProbeResult(
        "each sentinel action appended an audit record",
        not unlogged, f"missing={unlogged}")]

    rows = ctx.storage_query(
        "SELECT action, target, actor_realm FROM audit_records ORDER BY id DESC LIMIT 20")
    malformed = [dict(r) for r in rows if not r["action"] or not r["target"]]
    result.append(ProbeResult(
        "audit records carry actor, action, and target fields",
        not malformed, str(malformed[:3])))
    return result


FAMILIES: dict[str, Callable] = {
    "A1": probe_a1,
    "A2": probe_a2,
    "A3": probe_a3,
    "A5": probe_a5,
    "A6": probe_a6,
    "A7": probe_a7,
    "A10": probe_a10,
}
