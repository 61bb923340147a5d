"""The transport tier: routes, the session -> CSRF -> throttle -> authorize
chain, sanitized error shapes, and security headers."""

from __future__ import annotations

import csv
import io
import re
import traceback
from dataclasses import replace

from fastapi import Depends, FastAPI, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse, Response
from starlette.exceptions import HTTPException as StarletteHTTPException

from ..access_control import (
    Action,
    Principal,
    ResourceScope,
    authorize,
    require,
    scope_department,
)
from ..domain import (
    Designation,
    PinRole,
    Realm,
    Role,
    Semester,
    Sex,
    validate_email,
)
from ..errors import (
    CsrfMismatch,
    HodSeatTaken,
    InvalidCredentials,
    InvalidSession,
    MalformedEmail,
    NotFound,
    ServiceError,
    Unauthorized,
    ValidationFailed,
)
from ..runtime import Runtime
from . import serializers as ser
from .routes import ANONYMOUS, ROUTES, RouteSpec, SESSION
from .schemas import (
    AssignmentBody,
    CadetPatchBody,
    CadetPinBody,
    CadetRegisterBody,
    CourseBody,
    CoursePatchBody,
    CourseRegistrationBody,
    EventBody,
    LoginBody,
    PasswordChangeBody,
    ProfilePatchBody,
    RegistrationWindowBody,
    ResetBeginBody,
    ResetCompleteBody,
    StaffPatchBody,
    StaffPinBody,
    StaffRegisterBody,
)

SESSION_COOKIE = "sims_session"
CSRF_HEADER = "X-CSRF-Token"

_FILENAME_SAFE = re.compile(r"[^A-Za-z0-9._ -]")

MEDIA_CONTENT_TYPES = {
    "pdf": "application/pdf",
    "doc": "application/msword",
    "docx": "application/vnd.openxmlformats-officedocument.wordprocessingml.document",
    "ppt": "application/vnd.ms-powerpoint",
    "pptx": "application/vnd.openxmlformats-officedocument.presentationml.presentation",
}


class UTF8JSONResponse(JSONResponse):
    media_type = "application/json; charset=utf-8"


def _error_response(status: int, code: str, message: str) -> UTF8JSONResponse:
    return UTF8JSONResponse(
        {"machineCode": code, "message": message}, status_code=status
    )


# ---------------------------------------------------------------------------
# ASGI middleware
# ---------------------------------------------------------------------------


class SecurityHeadersMiddleware:
    HEADERS = (
        (b"x-content-type-options", b"nosniff"),
        (b"x-frame-options", b"DENY"),
        (b"content-security-policy", b"default-src 'none'"),
    )

    def __init__(self, app, enabled: bool = True):
        self.app = app
        self.enabled = enabled

    async def __call__(self, scope, receive, send):
        if scope["type"] != "http" or not self.enabled:
            await self.app(scope, receive, send)
            return

        async def send_with_headers(message):
            if message["type"] == "http.response.start":
                headers = list(message.get("headers", []))
                present = {name.lower() for name, _ in headers}
                for name, value in self.HEADERS:
                    if name not in present:
                        headers.append((name, value))
                message = {**message, "headers": headers}
            await send(message)

        await self.app(scope, receive, send_with_headers)


class BodyLimitMiddleware:
    """Content-Length caps: 1 MiB for structured bodies, a larger allowance
    on upload routes. State-changing requests without a length get 411."""

    def __init__(self, app, json_limit: int, upload_limit: int):
        self.app = app
        self.json_limit = json_limit
        self.upload_limit = upload_limit

    async def __call__(self, scope, receive, send):
        if scope["type"] == "http" and scope.get("method") in {"POST", "PUT", "PATCH", "DELETE"}:
            headers = {k.decode("latin-1").lower(): v.decode("latin-1")
                       for k, v in scope.get("headers", [])}
            limit = (
                self.upload_limit
                if scope["path"].endswith("/materials")
                else self.json_limit
            )
            length_text = headers.get("content-length")
            if length_text is None:
                if "chunked" in headers.get("transfer-encoding", "").lower():
                    await _error_response(411, "length_required",
                                          "Content-Length required")(scope, receive, send)
                    return
            else:
                try:
                    length = int(length_text)
                except ValueError:
                    await _error_response(411, "length_required",
                                          "Content-Length required")(scope, receive, send)
                    return
                if length > limit:
                    await _error_response(413, "payload_too_large",
                                          "request body too large")(scope, receive, send)
                    return
        await self.app(scope, receive, send)


# ---------------------------------------------------------------------------
# app factory
# ---------------------------------------------------------------------------


def create_app(runtime: Runtime) -> FastAPI:
    app = FastAPI(
        title="academy-sims",
        openapi_url=None,
        docs_url=None,
        redoc_url=None,
        default_response_class=UTF8JSONResponse,
    )
    app.state.runtime = runtime
    config = runtime.config
    store = runtime.store

    # -- helpers ---------------------------------------------------------------

    def set_session_cookie(response: Response, token: str) -> None:
        response.set_cookie(
            SESSION_COOKIE, token,
            httponly=True, samesite="lax", secure=config.secure_cookies, path="/",
        )

    def build_principal(ref) -> Principal:
        bypass = config.weakened("a5")
        if ref.realm == Realm.ADMIN:
            admin = store.admins.get(ref.id)
            return Principal(Realm.ADMIN, admin.id, Role.ADMIN, admin.email,
                             admin.name, None, bypass)
        if ref.realm == Realm.STAFF:
            staff = store.staff.get(ref.id)
            return Principal(Realm.STAFF, staff.id, staff.role, staff.email,
                             f"{staff.first_name} {staff.sur_name}",
                             staff.department, bypass)
        cadet = store.cadets.get(ref.id)
        return Principal(Realm.CADET, cadet.id, Role.CADET, cadet.email,
                         f"{cadet.first_name} {cadet.sur_name}",
                         cadet.department, bypass)

    # -- dependency chain: session -> csrf -> authorize ---------------------------

    def current_principal(request: Request) -> Principal:
        token_id = request.cookies.get(SESSION_COOKIE, "")
        ref = runtime.sessions.validate(token_id)
        try:
            principal = build_principal(ref)
        except NotFound:
            raise InvalidSession() from None
        request.state.session_token_id = token_id
        return principal

    def csrf_guard(request: Request) -> None:
        if config.insecure_demo:
            return
        token_id = request.cookies.get(SESSION_COOKIE, "")
        runtime.csrf.validate(token_id, request.headers.get(CSRF_HEADER))

    def make_gate(action: Action):
        def gate(principal: Principal = Depends(current_principal)) -> None:
            if not authorize(principal, action, None):
                raise Unauthorized()
        return gate

    def client_key(request: Request, realm: str, identifier: str) -> str:
        host = request.client.host if request.client else "unknown"
        return f"{realm}:{identifier}|{host}"

    def current_session_year() -> int:
        return store.academic_sessions.get_current().year

    # -- anonymous handlers --------------------------------------------------------

    def health() -> dict:
        return {"status": "ok"}

    def make_login(realm: Realm):
        def login(body: LoginBody, request: Request) -> UTF8JSONResponse:
            try:
                email = validate_email(body.email)
            except MalformedEmail:
                raise InvalidCredentials() from None
            key = client_key(request, realm.value, email)
            runtime.throttle.check(key)
            account = _lookup(email)
            ok = False
            if config.weakened("a1") and realm == Realm.ADMIN:
                # Deliberate injection fault for scanner validation: the
                # interpolated query is the vulnerability under test.
                row = store._conn().execute(
                    f"SELECT id FROM admins WHERE email = '{body.email}'"
                    f" AND password_hash = '{body.password}'"
                ).fetchone()
                if row is not None:
                    account = store.admins.get(row["id"])
                    ok = True
            if not ok:
                ok = account is not None and runtime.hasher.verify(
                    body.password, account.password_hash
                )
            if not ok:
                runtime.throttle.record_failure(key)
                store.audit.append(None, "login_failure", email,
                                   {"realm": realm.value})
                raise InvalidCredentials()
            runtime.throttle.reset(key)
            token = runtime.sessions.issue(account.ref)
            details = {"realm": realm.value}
            if config.weakened("a3"):
                details["password"] = body.password  # deliberate fault
            store.audit.append(account.ref, "login_success", email, details)
            principal = build_principal(account.ref)
            response = UTF8JSONResponse(ser.principal_json(principal))
            set_session_cookie(response, token)
            return response

        def _lookup(email: str):
            if realm == Realm.ADMIN:
                return store.admins.get_by_email(email)
            if realm == Realm.STAFF:
                return store.staff.get_by_email(email)
            return store.cadets.get_by_email(email)

        return login

    def register_staff(body: StaffRegisterBody, request: Request) -> UTF8JSONResponse:
        key = client_key(request, "register", "staff")
        runtime.throttle.check(key)
        try:
            staff = runtime.onboarding.register_staff(
                body.pin, sur_name=body.surName, first_name=body.firstName,
                email=body.email, password=body.password,
            )
        except ServiceError:
            runtime.throttle.record_failure(key)
            raise
        return UTF8JSONResponse(ser.staff_json(staff), status_code=201)

    def register_cadet(body: CadetRegisterBody, request: Request) -> UTF8JSONResponse:
        key = client_key(request, "register", "cadet")
        runtime.throttle.check(key)
        try:
            cadet = runtime.onboarding.register_cadet(
                body.pin, body.npaNumber,
                sur_name=body.surName, first_name=body.firstName,
                middle_name=body.middleName, email=body.email,
                password=body.password, rc=body.rc, level=body.level,
                semester=_semester(body.semester), squad=body.squad,
                sex=_sex(body.sex), dob=body.dob, home_town=body.homeTown,
                local_govt=body.localGovt, state=body.state, address=body.address,
                next_of_kin_sur_name=body.nextOfKinSurName,
                next_of_kin_first_name=body.nextOfKinFirstName,
                next_of_kin_relationship=body.nextOfKinRelationship,
                next_of_kin_address=body.nextOfKinAddress,
            )
        except ServiceError:
            runtime.throttle.record_failure(key)
            raise
        return UTF8JSONResponse(ser.cadet_json(cadet), status_code=201)

    def reset_begin(body: ResetBeginBody) -> UTF8JSONResponse:
        # Byte-identical response whether or not the email exists.
        try:
            email = validate_email(body.email)
            runtime.reset.begin(email)
        except MalformedEmail:
            pass
        return UTF8JSONResponse({"status": "accepted"}, status_code=202)

    def reset_complete(body: ResetCompleteBody) -> dict:
        runtime.reset.complete(body.token, body.newPassword)
        return {"status": "ok"}

    # -- session handlers ------------------------------------------------------------

    def logout(request: Request,
               principal: Principal = Depends(current_principal)) -> UTF8JSONResponse:
        runtime.sessions.revoke(request.state.session_token_id)
        store.audit.append(principal.ref, "logout", principal.email)
        response = UTF8JSONResponse({"status": "ok"})
        response.delete_cookie(SESSION_COOKIE, path="/")
        return response

    def csrf_token(request: Request,
                   principal: Principal = Depends(current_principal)) -> dict:
        return {"csrfToken": runtime.csrf.issue(request.state.session_token_id)}

    def me_get(principal: Principal = Depends(current_principal)) -> dict:
        profile = _own_profile(principal)
        profile["role"] = principal.role.value
        profile["realm"] = principal.realm.value
        return profile

    def _own_profile(principal: Principal) -> dict:
        if principal.realm == Realm.ADMIN:
            return ser.admin_json(store.admins.get(principal.id))
        if principal.realm == Realm.STAFF:
            return ser.staff_json(store.staff.get(principal.id))
        return ser.cadet_json(store.cadets.get(principal.id))

    def me_patch(body: ProfilePatchBody,
                 principal: Principal = Depends(current_principal)) -> dict:
        require(principal, Action.EDIT_OWN_PROFILE,
                ResourceScope(owner=principal.ref))
        if principal.realm == Realm.STAFF and body.designation is not None:
            runtime.onboarding.complete_registration(
                principal, _designation(body.designation),
                cv=body.cv, address=body.address, dob=body.dob,
            )
            return me_get(principal)
        if principal.realm == Realm.ADMIN:
            admin = store.admins.get(principal.id)
            store.admins.update(replace(
                admin,
                name=body.name if body.name is not None else admin.name,
                passport=body.passport if body.passport is not None else admin.passport,
            ))
        elif principal.realm == Realm.STAFF:
            staff = store.staff.get(principal.id)
            store.staff.update(replace(
                staff,
                address=body.address if body.address is not None else staff.address,
                dob=body.dob if body.dob is not None else staff.dob,
                cv=body.cv if body.cv is not None else staff.cv,
                passport=body.passport if body.passport is not None else staff.passport,
            ))
        else:
            cadet = store.cadets.get(principal.id)
            store.cadets.update(replace(
                cadet,
                address=body.address if body.address is not None else cadet.address,
                dob=body.dob if body.dob is not None else cadet.dob,
                home_town=body.homeTown if body.homeTown is not None else cadet.home_town,
                local_govt=body.localGovt if body.localGovt is not None else cadet.local_govt,
                state=body.state if body.state is not None else cadet.state,
                passport=body.passport if body.passport is not None else cadet.passport,
                next_of_kin_sur_name=body.nextOfKinSurName
                    if body.nextOfKinSurName is not None else cadet.next_of_kin_sur_name,
                next_of_kin_first_name=body.nextOfKinFirstName
                    if body.nextOfKinFirstName is not None else cadet.next_of_kin_first_name,
                next_of_kin_relationship=body.nextOfKinRelationship
                    if body.nextOfKinRelationship is not None else cadet.next_of_kin_relationship,
                next_of_kin_address=body.nextOfKinAddress
                    if body.nextOfKinAddress is not None else cadet.next_of_kin_address,
            ))
        store.audit.append(principal.ref, "profile_updated", principal.email)
        return me_get(principal)

    def me_password(body: PasswordChangeBody, request: Request,
                    principal: Principal = Depends(current_principal)) -> dict:
        require(principal, Action.CHANGE_OWN_PASSWORD,
                ResourceScope(owner=principal.ref))
        account = _account_of(principal)
        if not runtime.hasher.verify(body.currentPassword, account.password_hash):
            raise InvalidCredentials()
        new_hash = runtime.hasher.hash(body.newPassword)
        _update_password(principal, new_hash)
        runtime.sessions.revoke_all(
            principal.ref, except_token=request.state.session_token_id
        )
        store.audit.append(principal.ref, "password_changed", principal.email)
        return {"status": "ok"}

    def _account_of(principal: Principal):
        if principal.realm == Realm.ADMIN:
            return store.admins.get(principal.id)
        if principal.realm == Realm.STAFF:
            return store.staff.get(principal.id)
        return store.cadets.get(principal.id)

    def _update_password(principal: Principal, new_hash: str) -> None:
        account = _account_of(principal)
        updated = replace(account, password_hash=new_hash)
        if principal.realm == Realm.ADMIN:
            store.admins.update(updated)
        elif principal.realm == Realm.STAFF:
            store.staff.update(updated)
        else:
            store.cadets.update(updated)

    def events_list(principal: Principal = Depends(current_principal)):
        events = runtime.academics.list_events()
        if config.weakened("a7"):
            # Deliberate stored-XSS fault: user text re-served as HTML.
            html = "".join(f"<h2>{e.title}</h2><p>{e.body}</p>" for e in events)
            return HTMLResponse(html)
        return [ser.event_json(e) for e in events]

    # -- admin handlers -----------------------------------------------------------

    def admin_staff_list(principal: Principal = Depends(current_principal)):
        return [ser.staff_json(s) for s in store.staff.list()]

    def admin_staff_patch(staff_id: int, body: StaffPatchBody,
                          principal: Principal = Depends(current_principal)) -> dict:
        require(principal, Action.EDIT_STAFF)
        with store.transaction():
            staff = store.staff.get(staff_id)
            designation = staff.designation
            if body.designation is not None:
                designation = _designation(body.designation)
                if designation == Designation.HOD:
                    head = store.staff.head_of(body.department or staff.department)
                    if head is not None and head.id != staff.id:
                        raise HodSeatTaken()
            updated = store.staff.update(replace(
                staff,
                sur_name=body.surName if body.surName is not None else staff.sur_name,
                first_name=body.firstName if body.firstName is not None else staff.first_name,
                designation=designation,
                department=body.department if body.department is not None else staff.department,
                address=body.address if body.address is not None else staff.address,
                email=body.email if body.email is not None else staff.email,
            ))
            store.audit.append(principal.ref, "staff_edited", updated.email)
        return ser.staff_json(updated)

    def admin_staff_pins_list(principal: Principal = Depends(current_principal)):
        return [ser.pin_json(p) for p in store.pins.list(target_role=PinRole.STAFF)]

    def admin_staff_pins_create(body: StaffPinBody,
                                principal: Principal = Depends(current_principal)):
        pins = runtime.onboarding.generate_pins(
            principal, PinRole.STAFF, body.department, body.count
        )
        return UTF8JSONResponse([ser.pin_json(p) for p in pins], status_code=201)

    def admin_events_list(principal: Principal = Depends(current_principal)):
        return [ser.event_json(e) for e in runtime.academics.list_events()]

    def admin_events_create(body: EventBody,
                            principal: Principal = Depends(current_principal)):
        event = runtime.academics.create_event(
            principal, body.title, body.body, body.eventDate
        )
        return UTF8JSONResponse(ser.event_json(event), status_code=201)

    # -- hod handlers ----------------------------------------------------------------

    def hod_cadets_list(principal: Principal = Depends(current_principal)):
        return [
            ser.cadet_json(c)
            for c in store.cadets.list(department=scope_department(principal))
        ]

    def hod_cadet_patch(cadet_id: int, body: CadetPatchBody,
                        principal: Principal = Depends(current_principal)) -> dict:
        with store.transaction():
            cadet = store.cadets.get(cadet_id)
            require(principal, Action.EDIT_CADET,
                    ResourceScope(department=cadet.department))
            updated = store.cadets.update(replace(
                cadet,
                sur_name=body.surName if body.surName is not None else cadet.sur_name,
                first_name=body.firstName if body.firstName is not None else cadet.first_name,
                middle_name=body.middleName if body.middleName is not None else cadet.middle_name,
                level=body.level if body.level is not None else cadet.level,
                squad=body.squad if body.squad is not None else cadet.squad,
                semester=_semester(body.semester) if body.semester is not None else cadet.semester,
                address=body.address if body.address is not None else cadet.address,
            ))
            store.audit.append(principal.ref, "cadet_edited", updated.npa_number)
        return ser.cadet_json(updated)

    def hod_cadet_pins_list(principal: Principal = Depends(current_principal)):
        return [
            ser.pin_json(p)
            for p in store.pins.list(target_role=PinRole.CADET,
                                     department=principal.department)
        ]

    def hod_cadet_pins_create(body: CadetPinBody,
                              principal: Principal = Depends(current_principal)):
        pins = runtime.onboarding.generate_pins(
            principal, PinRole.CADET, principal.department, body.count
        )
        return UTF8JSONResponse([ser.pin_json(p) for p in pins], status_code=201)

    def hod_roster_list(principal: Principal = Depends(current_principal)):
        return [
            {"npaNumber": e.npa_number, "department": e.department,
             "claimed": e.claimed, "claimedBy": e.claimed_by}
            for e in store.roster.list(department=principal.department)
        ]

    async def hod_roster_upload(request: Request,
                                principal: Principal = Depends(current_principal)) -> dict:
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ValidationFailed("roster upload must be UTF-8 text") from None
        report = runtime.onboarding.upload_npa_roster(
            principal, principal.department, text.splitlines()
        )
        return {
            "accepted": report.accepted,
            "rejected": [{"line": r.line, "reason": r.reason} for r in report.rejected],
        }

    def hod_courses_list(principal: Principal = Depends(current_principal)):
        return [
            ser.course_json(c)
            for c in runtime.academics.list_department_courses(principal)
        ]

    def hod_courses_create(body: CourseBody,
                           principal: Principal = Depends(current_principal)):
        course = runtime.academics.create_course(
            principal, body.courseCode, body.courseTitle, principal.department,
            body.level, body.unit, _semester(body.semester), body.year,
        )
        return UTF8JSONResponse(ser.course_json(course), status_code=201)

    def hod_course_patch(course_code: str, body: CoursePatchBody,
                         principal: Principal = Depends(current_principal)) -> dict:
        course = runtime.academics.edit_course(
            principal, course_code,
            title=body.courseTitle,
            level=body.level,
            unit=body.unit,
            semester=_semester(body.semester) if body.semester is not None else None,
            year=body.year,
        )
        return ser.course_json(course)

    def hod_course_delete(course_code: str,
                          principal: Principal = Depends(current_principal)) -> dict:
        runtime.academics.delete_course(principal, course_code)
        return {"status": "deleted", "courseCode": course_code}

    def hod_assignments_create(body: AssignmentBody,
                               principal: Principal = Depends(current_principal)):
        year = body.sessionYear if body.sessionYear is not None else current_session_year()
        assignment = runtime.academics.assign_course(
            principal, body.courseCode, body.staffId, year
        )
        return UTF8JSONResponse(ser.assignment_json(assignment), status_code=201)

    def hod_lecturers_list(principal: Principal = Depends(current_principal)):
        return [
            ser.staff_json(s)
            for s in store.staff.list(department=principal.department)
            if s.designation is not None
        ]

    def hod_registration_window(body: RegistrationWindowBody,
                                principal: Principal = Depends(current_principal)) -> dict:
        runtime.academics.set_registration_window(
            principal, principal.department, body.open
        )
        return {"department": principal.department, "open": body.open}

    def hod_results(sessionYear: int | None = None,
                    principal: Principal = Depends(current_principal)):
        year = sessionYear if sessionYear is not None else current_session_year()
        scores = runtime.academics.department_results(principal, year)
        out = []
        for score in scores:
            cadet = store.cadets.get(score.cadet_id)
            out.append({
                "npaNumber": cadet.npa_number,
                "cadetName": f"{cadet.first_name} {cadet.sur_name}",
                "courseCode": score.course_code,
                "sessionYear": score.session_year,
                "semester": score.semester.value,
                "total": score.total,
                "grade": score.grade,
            })
        return out

    # -- lecturer handlers --------------------------------------------------------------

    def lecturer_courses(principal: Principal = Depends(current_principal)):
        return [ser.course_json(c) for c in runtime.academics.assigned_courses(principal)]

    def lecturer_course_cadets(course_code: str, sessionYear: int | None = None,
                               principal: Principal = Depends(current_principal)):
        year = sessionYear if sessionYear is not None else current_session_year()
        cadets = runtime.academics.list_registered_cadets(principal, course_code, year)
        return [ser.cadet_json(c) for c in cadets]

    async def lecturer_scores_upload(course_code: str, request: Request,
                                     sessionYear: int | None = None,
                                     principal: Principal = Depends(current_principal)) -> dict:
        raw = await request.body()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ValidationFailed("score upload must be UTF-8 CSV") from None
        rows = _parse_score_csv(text)
        year = sessionYear if sessionYear is not None else current_session_year()
        report = runtime.academics.upload_scores(principal, course_code, year, rows)
        return {
            "accepted": [
                {"npaNumber": a.npa_number, "total": a.total, "grade": a.grade}
                for a in report.accepted
            ],
            "rejected": [
                {"npaNumber": r.npa_number, "reason": r.reason}
                for r in report.rejected
            ],
        }

    def lecturer_material_upload(course_code: str, file: UploadFile,
                                 principal: Principal = Depends(current_principal)):
        content = file.file.read()
        material = runtime.academics.upload_material(
            principal, course_code, file.filename or "unnamed", content
        )
        return UTF8JSONResponse(ser.material_json(material), status_code=201)

    # -- cadet handlers ------------------------------------------------------------------

    def cadet_eligible_courses(principal: Principal = Depends(current_principal)) -> dict:
        cadet = store.cadets.get(principal.id)
        session = store.academic_sessions.get_current()
        courses = runtime.academics.eligible_courses(cadet)
        return {
            "sessionYear": session.year,
            "semester": session.current_semester.value,
            "registrationOpen": store.academic_sessions.window_open(cadet.department),
            "courses": [ser.course_json(c) for c in courses],
        }

    def cadet_register_courses(body: CourseRegistrationBody,
                               principal: Principal = Depends(current_principal)):
        cadet = store.cadets.get(principal.id)
        created = runtime.academics.register_courses(
            principal, cadet, list(body.courseCodes)
        )
        return UTF8JSONResponse(
            {"registered": [ser.registration_json(r) for r in created]},
            status_code=201,
        )

    def cadet_results(principal: Principal = Depends(current_principal)):
        cadet = store.cadets.get(principal.id)
        require(principal, Action.VIEW_OWN_RESULTS, ResourceScope(owner=cadet.ref))
        return [
            {
                "courseCode": row.course_code,
                "courseTitle": row.course_title,
                "sessionYear": row.session_year,
                "semester": row.semester.value,
                "unit": row.unit,
                "total": row.total,
                "grade": row.grade,
                "status": row.status,
            }
            for row in runtime.academics.view_results(cadet)
        ]

    def cadet_materials_list(principal: Principal = Depends(current_principal)):
        cadet = store.cadets.get(principal.id)
        return [
            ser.material_json(m)
            for m in runtime.academics.list_materials_for_cadet(cadet)
        ]

    def cadet_material_download(material_id: int,
                                principal: Principal = Depends(current_principal)) -> Response:
        material, content = runtime.academics.get_material_content(principal, material_id)
        filename = _FILENAME_SAFE.sub("_", material.original_filename)[-120:] or "download"
        return Response(
            content=content,
            media_type=MEDIA_CONTENT_TYPES.get(material.media_kind.value,
                                               "application/octet-stream"),
            headers={"Content-Disposition": f'attachment; filename="{filename}"'},
        )

    # -- registration of routes ------------------------------------------------------

    handlers = {
        "health": health,
        "login_admin": make_login(Realm.ADMIN),
        "login_staff": make_login(Realm.STAFF),
        "login_cadet": make_login(Realm.CADET),
        "register_staff": register_staff,
        "register_cadet": register_cadet,
        "reset_begin": reset_begin,
        "reset_complete": reset_complete,
        "logout": logout,
        "csrf_token": csrf_token,
        "me_get": me_get,
        "me_patch": me_patch,
        "me_password": me_password,
        "events_list": events_list,
        "admin_staff_list": admin_staff_list,
        "admin_staff_patch": admin_staff_patch,
        "admin_staff_pins_list": admin_staff_pins_list,
        "admin_staff_pins_create": admin_staff_pins_create,
        "admin_events_list": admin_events_list,
        "admin_events_create": admin_events_create,
        "hod_cadets_list": hod_cadets_list,
        "hod_cadet_patch": hod_cadet_patch,
        "hod_cadet_pins_list": hod_cadet_pins_list,
        "hod_cadet_pins_create": hod_cadet_pins_create,
        "hod_roster_list": hod_roster_list,
        "hod_roster_upload": hod_roster_upload,
        "hod_courses_list": hod_courses_list,
        "hod_courses_create": hod_courses_create,
        "hod_course_patch": hod_course_patch,
        "hod_course_delete": hod_course_delete,
        "hod_assignments_create": hod_assignments_create,
        "hod_lecturers_list": hod_lecturers_list,
        "hod_registration_window": hod_registration_window,
        "hod_results": hod_results,
        "lecturer_courses": lecturer_courses,
        "lecturer_course_cadets": lecturer_course_cadets,
        "lecturer_scores_upload": lecturer_scores_upload,
        "lecturer_material_upload": lecturer_material_upload,
        "cadet_eligible_courses": cadet_eligible_courses,
        "cadet_register_courses": cadet_register_courses,
        "cadet_results": cadet_results,
        "cadet_materials_list": cadet_materials_list,
        "cadet_material_download": cadet_material_download,
    }

    for spec in ROUTES:
        dependencies = []
        if spec.auth == SESSION:
            dependencies.append(Depends(current_principal))
            if spec.csrf_required:
                dependencies.append(Depends(csrf_guard))
            if spec.action is not None:
                dependencies.append(Depends(make_gate(spec.action)))
        app.add_api_route(
            spec.path,
            handlers[spec.handler],
            methods=[spec.method],
            dependencies=dependencies,
            response_model=None,
            name=f"{spec.method} {spec.path}",
        )

    _install_error_handlers(app, verbose_errors=config.weakened("a6"))
    app.add_middleware(
        BodyLimitMiddleware,
        json_limit=config.json_body_limit,
        upload_limit=config.upload_body_limit,
    )
    app.add_middleware(SecurityHeadersMiddleware, enabled=not config.weakened("a6"))
    return app


# ---------------------------------------------------------------------------
# enum parsing and error handlers
# ---------------------------------------------------------------------------


def _semester(value: str) -> Semester:
    try:
        return Semester(value.strip().lower())
    except ValueError:
        raise ValidationFailed("semester must be 'first' or 'second'") from None


def _sex(value: str) -> Sex:
    try:
        return Sex(value.strip().upper())
    except ValueError:
        raise ValidationFailed("sex must be 'M' or 'F'") from None


def _designation(value: str) -> Designation:
    try:
        return Designation(value.strip().lower())
    except ValueError:
        raise ValidationFailed("designation must be 'hod' or 'lecturer'") from None


def _parse_score_csv(text: str) -> list[tuple[str, float]]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ValidationFailed("empty CSV body") from None
    except csv.Error as exc:
        raise ValidationFailed("malformed CSV body") from exc
    if [h.strip().lower() for h in header] != ["npa_number", "total"]:
        raise ValidationFailed("CSV header must be: npa_number,total")
    rows: list[tuple[str, float]] = []
    try:
        for record in reader:
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != 2:
                raise ValidationFailed("each CSV row must have exactly two columns")
            npa, total_text = record[0].strip(), record[1].strip()
            try:
                total = float(total_text)
            except ValueError:
                total = float("nan")
            rows.append((npa, total))
    except csv.Error as exc:
        raise ValidationFailed("malformed CSV body") from exc
    return rows


def _install_error_handlers(app: FastAPI, verbose_errors: bool) -> None:
    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return _error_response(exc.http_status, exc.machine_code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        fields = [
            {"field": ".".join(str(part) for part in err.get("loc", ())),
             "kind": err.get("type", "invalid")}
            for err in exc.errors()
        ]
        return UTF8JSONResponse(
            {"machineCode": "validation_error",
             "message": "request validation failed", "fields": fields},
            status_code=422,
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(request: Request, exc: StarletteHTTPException):
        codes = {404: "not_found", 405: "method_not_allowed"}
        code = codes.get(exc.status_code, "http_error")
        return _error_response(exc.status_code, code, str(exc.detail))

    @app.exception_handler(Exception)
    async def unexpected_handler(request: Request, exc: Exception):
        if verbose_errors:
            # Deliberate misconfiguration fault for scanner validation.
            return UTF8JSONResponse(
                {"machineCode": "internal_error", "message": repr(exc),
                 "trace": traceback.format_exc()},
                status_code=500,
            )
        return _error_response(500, "internal_error", "internal server error")
