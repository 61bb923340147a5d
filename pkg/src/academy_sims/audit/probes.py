"""Probe families, one per in-scope OWASP category.

Probes attack a *running* instance over HTTP; the storage file named in the
fixture is read directly for the data-exposure and logging checks. Families
run sequentially in a fixed order so verdicts are reproducible.
"""

from __future__ import annotations

import json
import secrets
import sqlite3
from dataclasses import dataclass, field
from typing import Callable

import httpx

from ..api.app import CSRF_HEADER
from ..errors import FixtureInvalid, TargetUnreachable

INJECTION_PAYLOADS = (
    "' OR '1'='1",
    '"; DROP TABLE staff;--',
    "' UNION SELECT NULL--",
    "admin'--",
    "x\x00y",
    "1; DELETE FROM cadets",
)

XSS_PAYLOAD = "<script>alert(1)</script>"

LEAK_MARKERS = ("sqlite", "traceback", "sqlalchemy", "syntax error",
                "site-packages", 'File "/')

ROLE_REALM = {"admin": "admin", "hod": "staff", "lecturer": "staff", "cadet": "cadet"}


# ---------------------------------------------------------------------------
# fixture and clients
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Credential:
    email: str
    password: str
    npa_number: str | None = None


@dataclass(frozen=True)
class Fixture:
    credentials: dict[str, Credential]
    storage_path: str
    department: str
    course_code: str
    session_year: int

    @classmethod
    def from_dict(cls, data: dict) -> "Fixture":
        try:
            credentials = {
                role: Credential(
                    email=entry["email"],
                    password=entry["password"],
                    npa_number=entry.get("npaNumber"),
                )
                for role, entry in data["credentials"].items()
            }
            fixture = cls(
                credentials=credentials,
                storage_path=data["storagePath"],
                department=data["department"],
                course_code=data["courseCode"],
                session_year=data["sessionYear"],
            )
        except KeyError as exc:
            raise FixtureInvalid(f"fixture is missing {exc}") from exc
        for role in ("admin", "hod", "lecturer", "cadet"):
            if role not in credentials:
                raise FixtureInvalid(f"fixture lacks credentials for {role}")
        return fixture

    @classmethod
    def load(cls, path: str) -> "Fixture":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise FixtureInvalid(f"cannot read fixture: {exc}") from exc


class RoleClient:
    """An authenticated client that attaches the session's CSRF token to
    state-changing requests."""

    def __init__(self, client: httpx.Client, csrf_token: str):
        self.client = client
        self.csrf_token = csrf_token

    def get(self, path, **kwargs):
        return self.client.get(path, **kwargs)

    def _with_csrf(self, kwargs):
        headers = dict(kwargs.pop("headers", {}) or {})
        headers.setdefault(CSRF_HEADER, self.csrf_token)
        kwargs["headers"] = headers
        return kwargs

    def post(self, path, **kwargs):
        return self.client.post(path, **self._with_csrf(kwargs))

    def patch(self, path, **kwargs):
        return self.client.patch(path, **self._with_csrf(kwargs))

    def delete(self, path, **kwargs):
        return self.client.delete(path, **self._with_csrf(kwargs))

    def request(self, method, path, **kwargs):
        if method in {"POST", "PUT", "PATCH", "DELETE"}:
            kwargs = self._with_csrf(kwargs)
        return self.client.request(method, path, **kwargs)

    def close(self):
        self.client.close()


@dataclass
class ProvisionedData:
    lecturer_id: int | None = None
    cadet_a_id: int | None = None
    cadet_b: Credential | None = None
    cadet_b_id: int | None = None
    material_id: int | None = None
    disposable_course: str = "AUD-901"


@dataclass
class AuditContext:
    target: str
    fixture: Fixture
    client_factory: Callable[[], httpx.Client]
    provisioned: ProvisionedData = field(default_factory=ProvisionedData)
    _role_clients: dict = field(default_factory=dict)

    def anon(self) -> httpx.Client:
        return self.client_factory()

    def fresh_login(self, role: str) -> RoleClient:
        cred = self.fixture.credentials[role]
        return self.login_with(ROLE_REALM[role], cred.email, cred.password)

    def login_with(self, realm: str, email: str, password: str) -> RoleClient:
        client = self.client_factory()
        response = client.post(f"/api/{realm}/login",
                               json={"email": email, "password": password})
        if response.status_code != 200:
            raise FixtureInvalid(
                f"cannot log in as {realm} {email}: {response.status_code}"
            )
        csrf = client.get("/api/csrf").json()["csrfToken"]
        return RoleClient(client, csrf)

    def as_role(self, role: str) -> RoleClient:
        """Cached session per role; probes that destroy their session must
        use fresh_login instead."""
        if role not in self._role_clients:
            self._role_clients[role] = self.fresh_login(role)
        return self._role_clients[role]

    def close(self):
        for client in self._role_clients.values():
            client.close()
        self._role_clients.clear()

    def read_storage_bytes(self) -> bytes:
        blobs = []
        for suffix in ("", "-wal", "-shm"):
            try:
                with open(self.fixture.storage_path + suffix, "rb") as fh:
                    blobs.append(fh.read())
            except FileNotFoundError:
                continue
        return b"".join(blobs)

    def storage_query(self, sql: str, params: tuple = ()) -> list:
        conn = sqlite3.connect(f"file:{self.fixture.storage_path}?mode=ro", uri=True)
        conn.row_factory = sqlite3.Row
        try:
            return conn.execute(sql, params).fetchall()
        finally:
            conn.close()


def check_reachable(ctx: AuditContext) -> None:
    try:
        response = ctx.anon().get("/health")
    except httpx.HTTPError as exc:
        raise TargetUnreachable(f"cannot reach {ctx.target}: {exc}") from exc
    if response.status_code != 200:
        raise TargetUnreachable(
            f"{ctx.target}/health returned {response.status_code}"
        )


def provision(ctx: AuditContext) -> None:
    """Create the collateral the probes need: a second cadet, a material,
    and a disposable course. Get-or-create so reruns behave."""
    p = ctx.provisioned
    fixture = ctx.fixture
    hod = ctx.as_role("hod")

    admin = ctx.as_role("admin")
    staff = admin.get("/api/admin/staff").json()
    lecturer_email = fixture.credentials["lecturer"].email
    p.lecturer_id = next(s["id"] for s in staff if s["email"] == lecturer_email)

    cadet_b_email = "audit.cadet.b@academy.example"
    # deterministic so a rerun can log back in instead of re-registering
    cadet_b_password = "auditB-" + fixture.credentials["cadet"].password
    npa_b = "NPA/09/09/00911"
    probe_login = ctx.anon().post("/api/cadet/login", json={
        "email": cadet_b_email, "password": cadet_b_password})
    if probe_login.status_code != 200:
        pin = hod.post("/api/hod/cadet-pins", json={"count": 1}).json()[0]["pinCode"]
        hod.post("/api/hod/npa-roster", content=npa_b.encode(),
                 headers={"Content-Type": "text/plain"})
        created = ctx.anon().post("/api/cadet/register", json={
            "pin": pin, "npaNumber": npa_b, "surName": "Audit", "firstName": "B",
            "email": cadet_b_email, "password": cadet_b_password,
            "rc": 1, "level": 500, "semester": "first", "squad": 9, "sex": "F",
        })
        if created.status_code != 201:
            raise FixtureInvalid(
                f"cannot provision second cadet: {created.status_code} {created.text}"
            )
    p.cadet_b = Credential(cadet_b_email, cadet_b_password, npa_b)

    cadets = hod.get("/api/hod/cadets").json()
    p.cadet_a_id = next(
        c["id"] for c in cadets
        if c["email"] == fixture.credentials["cadet"].email
    )
    cadet_b_row = ctx.storage_query(
        "SELECT id FROM cadets WHERE email = ?", (cadet_b_email,)
    )
    p.cadet_b_id = cadet_b_row[0]["id"]

    lecturer = ctx.as_role("lecturer")
    upload = lecturer.post(
        f"/api/lecturer/courses/{fixture.course_code}/materials",
        files={"file": ("audit-notes.pdf", b"%PDF-1.4 audit material",
                        "application/pdf")},
    )
    if upload.status_code != 201:
        raise FixtureInvalid(f"cannot provision material: {upload.text}")
    p.material_id = upload.json()["id"]

    created = hod.post("/api/hod/courses", json={
        "courseCode": p.disposable_course, "courseTitle": "AUDIT TARGET",
        "level": 500, "unit": 1, "semester": "first",
        "year": fixture.session_year,
    })
    if created.status_code not in (201, 409):
        raise FixtureInvalid(f"cannot provision course: {created.text}")


# ---------------------------------------------------------------------------
# injection recipes: every text parameter of every route
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InjectionPoint:
    route: str                 # "METHOD /path"
    role: str | None           # None = anonymous
    field: str
    build: Callable[[AuditContext, str], dict]  # (ctx, payload) -> request kwargs


def _json_point(route: str, role: str | None, field: str, payload_key: str,
                benign: Callable[[AuditContext], dict],
                path: Callable[[AuditContext], str] | None = None) -> InjectionPoint:
    method, template = route.split(" ", 1)

    def build(ctx: AuditContext, payload: str) -> dict:
        body = benign(ctx)
        body[payload_key] = payload
        return {
            "method": method,
            "path": path(ctx) if path else template,
            "json": body,
        }

    return InjectionPoint(route, role, field, build)


def _fresh_email(_: AuditContext) -> str:
    return f"probe.{secrets.token_hex(6)}@academy.example"


def _path_quote(payload: str) -> str:
    from urllib.parse import quote

    return quote(payload, safe="")


def injection_points() -> list[InjectionPoint]:
    """One entry per injectable text parameter per route. Routes without any
    text parameter are listed in NO_TEXT_PARAM_ROUTES instead."""
    points: list[InjectionPoint] = []

    def login_points(realm: str):
        route = f"POST /api/{realm}/login"
        for field in ("email", "password"):
            points.append(_json_point(
                route, None, field, field,
                lambda ctx: {"email": _fresh_email(ctx), "password": "probepw99"},
            ))

    for realm in ("admin", "staff", "cadet"):
        login_points(realm)

    staff_register_benign = lambda ctx: {
        "pin": "zzzzzz99", "surName": "Probe", "firstName": "P",
        "email": _fresh_email(ctx), "password": "probepw99"}
    for field in ("pin", "surName", "firstName", "email", "password"):
        points.append(_json_point("POST /api/staff/register", None, field, field,
                                  staff_register_benign))

    cadet_register_benign = lambda ctx: {
        "pin": "zzzzzz99", "npaNumber": "NPA/00/00/00000", "surName": "Probe",
        "firstName": "P", "email": _fresh_email(ctx), "password": "probepw99",
        "rc": 1, "level": 100, "semester": "first", "squad": 1, "sex": "M"}
    for field in ("pin", "npaNumber", "surName", "firstName", "email",
                  "password", "semester", "sex"):
        points.append(_json_point("POST /api/cadet/register", None, field, field,
                                  cadet_register_benign))

    points.append(_json_point("POST /api/password-reset/begin", None,
                              "email", "email", lambda ctx: {}))
    for field in ("token", "newPassword"):
        points.append(_json_point(
            "POST /api/password-reset/complete", None, field, field,
            lambda ctx: {"token": "none", "newPassword": "probepw99"}))

    for field in ("address", "dob", "homeTown", "state"):
        points.append(_json_point("PATCH /api/me", "cadet", field, field,
                                  lambda ctx: {}))
    for field in ("currentPassword", "newPassword"):
        points.append(_json_point(
            "POST /api/me/password", "cadet", field, field,
            lambda ctx: {"currentPassword": "wrongpw99",
                         "newPassword": "probepw99"}))

    points.append(InjectionPoint(
        "PATCH /api/admin/staff/{staff_id}", "admin", "staff_id (path)",
        lambda ctx, payload: {
            "method": "PATCH",
            "path": f"/api/admin/staff/{_path_quote(payload)}",
            "json": {},
        },
    ))
    for field in ("surName", "address", "email", "department", "designation"):
        points.append(_json_point(
            "PATCH /api/admin/staff/{staff_id}", "admin", field, field,
            lambda ctx: {},
            path=lambda ctx: f"/api/admin/staff/{ctx.provisioned.lecturer_id}",
        ))

    points.append(_json_point(
        "POST /api/admin/staff-pins", "admin", "department", "department",
        lambda ctx: {"count": 1}))

    for field in ("title", "body", "eventDate"):
        points.append(_json_point(
            "POST /api/admin/events", "admin", field, field,
            lambda ctx: {"title": "probe", "body": "probe", "eventDate": "2019-01-01"}))

    points.append(InjectionPoint(
        "PATCH /api/hod/cadets/{cadet_id}", "hod", "cadet_id (path)",
        lambda ctx, payload: {
            "method": "PATCH", "path": f"/api/hod/cadets/{_path_quote(payload)}", "json": {},
        },
    ))
    for field in ("surName", "address", "semester"):
        points.append(_json_point(
            "PATCH /api/hod/cadets/{cadet_id}", "hod", field, field,
            lambda ctx: {},
            path=lambda ctx: f"/api/hod/cadets/{ctx.provisioned.cadet_a_id}",
        ))

    points.append(InjectionPoint(
        "POST /api/hod/npa-roster", "hod", "body line",
        lambda ctx, payload: {
            "method": "POST", "path": "/api/hod/npa-roster",
            "content": payload.encode(errors="replace"),
            "headers": {"Content-Type": "text/plain"},
        },
    ))

    course_benign = lambda ctx: {
        "courseCode": f"PRB-{secrets.token_hex(2).upper()}", "courseTitle": "probe",
        "level": 500, "unit": 1, "semester": "first", "year": 2019}
    for field in ("courseCode", "courseTitle", "semester"):
        points.append(_json_point("POST /api/hod/courses", "hod", field, field,
                                  course_benign))

    points.append(InjectionPoint(
        "PATCH /api/hod/courses/{course_code}", "hod", "course_code (path)",
        lambda ctx, payload: {
            "method": "PATCH",
            "path": f"/api/hod/courses/{_path_quote(payload)}",
            "json": {"courseTitle": "probe"},
        },
    ))
    points.append(InjectionPoint(
        "DELETE /api/hod/courses/{course_code}", "hod", "course_code (path)",
        lambda ctx, payload: {
            "method": "DELETE", "path": f"/api/hod/courses/{_path_quote(payload)}",
        },
    ))
    points.append(_json_point(
        "POST /api/hod/assignments", "hod", "courseCode", "courseCode",
        lambda ctx: {"staffId": ctx.provisioned.lecturer_id or 1,
                     "sessionYear": ctx.fixture.session_year}))

    points.append(InjectionPoint(
        "GET /api/lecturer/courses/{course_code}/cadets", "lecturer",
        "course_code (path)",
        lambda ctx, payload: {
            "method": "GET", "path": f"/api/lecturer/courses/{_path_quote(payload)}/cadets",
        },
    ))
    points.append(InjectionPoint(
        "POST /api/lecturer/courses/{course_code}/scores", "lecturer",
        "csv npa cell",
        lambda ctx, payload: {
            "method": "POST",
            "path": f"/api/lecturer/courses/{ctx.fixture.course_code}/scores",
            "content": f"npa_number,total\n{payload},50\n".encode(errors="replace"),
            "headers": {"Content-Type": "text/csv"},
        },
    ))
    points.append(InjectionPoint(
        "POST /api/lecturer/courses/{course_code}/scores", "lecturer",
        "csv total cell",
        lambda ctx, payload: {
            "method": "POST",
            "path": f"/api/lecturer/courses/{ctx.fixture.course_code}/scores",
            "content": f"npa_number,total\nNPA/00/00/00000,{payload}\n".encode(errors="replace"),
            "headers": {"Content-Type": "text/csv"},
        },
    ))
    points.append(InjectionPoint(
        "POST /api/lecturer/courses/{course_code}/materials", "lecturer",
        "filename",
        lambda ctx, payload: {
            "method": "POST",
            "path": f"/api/lecturer/courses/{ctx.fixture.course_code}/materials",
            "files": {"file": (f"{payload}.pdf", b"probe", "application/pdf")},
        },
    ))

    points.append(InjectionPoint(
        "POST /api/cadet/registrations", "cadet", "courseCodes entry",
        lambda ctx, payload: {
            "method": "POST", "path": "/api/cadet/registrations",
            "json": {"courseCodes": [payload]},
        },
    ))
    points.append(InjectionPoint(
        "GET /api/cadet/materials/{material_id}", "cadet", "material_id (path)",
        lambda ctx, payload: {
            "method": "GET", "path": f"/api/cadet/materials/{_path_quote(payload)}",
        },
    ))
    return points


# Routes whose requests carry no caller-controlled text at all.
NO_TEXT_PARAM_ROUTES = {
    "GET /health",
    "POST /api/logout",
    "GET /api/csrf",
    "GET /api/me",
    "GET /api/events",
    "GET /api/admin/staff",
    "GET /api/admin/staff-pins",
    "GET /api/admin/events",
    "GET /api/hod/cadets",
    "GET /api/hod/cadet-pins",
    "GET /api/hod/npa-roster",
    "GET /api/hod/courses",
    "POST /api/hod/cadet-pins",          # integer count only
    "POST /api/hod/registration-window", # boolean only
    "GET /api/hod/lecturers",
    "GET /api/hod/results",              # integer year only
    "GET /api/lecturer/courses",
    "GET /api/cadet/eligible-courses",
    "GET /api/cadet/results",
    "GET /api/cadet/materials",
}
