"""Course catalog, lecturer assignment, registration windows, automatic
eligibility, course registration, scores, materials, and events."""

from __future__ import annotations

import secrets
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

from .access_control import Action, Principal, ResourceScope, require
from .clock import Clock
from .domain import (
    Cadet,
    Course,
    CourseAssignment,
    CourseRegistration,
    Event,
    Material,
    MediaKind,
    Realm,
    Score,
    Semester,
    grade_of,
    parse_npa_number,
)
from .errors import (
    CrossDepartment,
    DisallowedType,
    FileTooLarge,
    IneligibleCourse,
    MalformedNpaNumber,
    NotFound,
    RegistrationClosed,
    Unauthorized,
    ValidationFailed,
)
from .store import Store

# Test seam for the window-toggle interleaving harness: called inside the
# registration transaction right after the window check.
_after_window_check: Callable[[], None] | None = None


@dataclass(frozen=True)
class AcceptedScore:
    npa_number: str
    total: float
    grade: str


@dataclass(frozen=True)
class RejectedScoreRow:
    npa_number: str
    reason: str


@dataclass(frozen=True)
class ScoreUploadReport:
    accepted: list[AcceptedScore]
    rejected: list[RejectedScoreRow]


@dataclass(frozen=True)
class ResultRow:
    course_code: str
    course_title: str
    session_year: int
    semester: Semester
    unit: int
    total: float | None
    grade: str | None

    @property
    def status(self) -> str:
        return "pending" if self.total is None else "graded"


class AcademicsService:
    def __init__(self, store: Store, clock: Clock, materials_dir: str,
                 max_material_bytes: int = 10 * 1024 * 1024):
        self.store = store
        self.clock = clock
        self.materials_dir = Path(materials_dir)
        self.max_material_bytes = max_material_bytes

    # -- catalog ---------------------------------------------------------------

    def create_course(self, issuer: Principal, course_code: str, title: str,
                      department: str, level: int, unit: int,
                      semester: Semester, year: int) -> Course:
        require(issuer, Action.CREATE_COURSE, ResourceScope(department=department))
        course = Course(
            course_code=course_code.strip().upper(),
            course_title=title,
            dept_name=department,
            level=level,
            unit=unit,
            semester=semester,
            year=year,
        )
        with self.store.transaction():
            stored = self.store.courses.insert(course)
            self.store.audit.append(issuer.ref, "course_created", stored.course_code,
                                    {"department": department})
        return stored

    def edit_course(self, issuer: Principal, course_code: str, *,
                    title: str | None = None, level: int | None = None,
                    unit: int | None = None, semester: Semester | None = None,
                    year: int | None = None) -> Course:
        with self.store.transaction():
            course = self.store.courses.get(course_code)
            require(issuer, Action.EDIT_COURSE, ResourceScope(department=course.dept_name))
            updated = self.store.courses.update(replace(
                course,
                course_title=title if title is not None else course.course_title,
                level=level if level is not None else course.level,
                unit=unit if unit is not None else course.unit,
                semester=semester if semester is not None else course.semester,
                year=year if year is not None else course.year,
            ))
            self.store.audit.append(issuer.ref, "course_updated", course_code)
        return updated

    def delete_course(self, issuer: Principal, course_code: str) -> None:
        with self.store.transaction():
            course = self.store.courses.get(course_code)
            require(issuer, Action.DELETE_COURSE, ResourceScope(department=course.dept_name))
            self.store.courses.soft_delete(course_code)
            self.store.audit.append(issuer.ref, "course_deleted", course_code)

    def list_department_courses(self, issuer: Principal) -> list[Course]:
        require(issuer, Action.CREATE_COURSE, ResourceScope(department=issuer.department))
        return self.store.courses.list(department=issuer.department)

    # -- assignment ------------------------------------------------------------

    def assign_course(self, issuer: Principal, course_code: str,
                      lecturer_staff_id: int, session_year: int) -> CourseAssignment:
        with self.store.transaction():
            course = self.store.courses.get(course_code)
            require(issuer, Action.ASSIGN_COURSE, ResourceScope(department=course.dept_name))
            lecturer = self.store.staff.get(lecturer_staff_id)
            if lecturer.department != course.dept_name:
                raise CrossDepartment()
            if lecturer.designation is None:
                raise ValidationFailed("staff member has not completed registration")
            assignment = self.store.assignments.upsert(
                course_code, lecturer_staff_id, session_year
            )
            self.store.audit.append(issuer.ref, "course_assigned", course_code,
                                    {"staff_id": lecturer_staff_id, "session": session_year})
        return assignment

    def assigned_courses(self, staff_principal: Principal) -> list[Course]:
        require(staff_principal, Action.LIST_ASSIGNED_COURSES)
        session = self.store.academic_sessions.get_current()
        assignments = self.store.assignments.list_for_staff(
            staff_principal.id, session.year
        )
        return [self.store.courses.get_any(a.course_code) for a in assignments]

    # -- registration window ----------------------------------------------------

    def set_registration_window(self, issuer: Principal, department: str,
                                open_: bool):
        require(issuer, Action.OPEN_REGISTRATION, ResourceScope(department=department))
        self.store.departments.get(department)
        with self.store.transaction():
            self.store.academic_sessions.set_window(department, open_)
            self.store.audit.append(issuer.ref, "registration_window_set", department,
                                    {"open": open_})
        return self.store.academic_sessions.get_current()

    # -- eligibility and registration --------------------------------------------

    def eligible_courses(self, cadet: Cadet) -> list[Course]:
        """Exactly the live courses matching the cadet's department and level
        and the current session's semester and year."""
        session = self.store.academic_sessions.get_current()
        return self.store.courses.eligible(
            cadet.department, cadet.level, session.current_semester, session.year
        )

    def register_courses(self, principal: Principal, cadet: Cadet,
                         course_codes: list[str]) -> list[CourseRegistration]:
        require(principal, Action.REGISTER_COURSES,
                ResourceScope(owner=cadet.ref))
        with self.store.transaction():
            if not self.store.academic_sessions.window_open(cadet.department):
                raise RegistrationClosed()
            if _after_window_check is not None:
                _after_window_check()
            session = self.store.academic_sessions.get_current()
            eligible = {c.course_code for c in self.eligible_courses(cadet)}
            for code in course_codes:
                if code not in eligible:
                    raise IneligibleCourse(f"course not eligible: {code}")
            created = []
            for code in course_codes:
                row = self.store.registrations.add_if_absent(CourseRegistration(
                    cadet_id=cadet.id,
                    course_code=code,
                    session_year=session.year,
                    semester=session.current_semester,
                ))
                if row is not None:
                    created.append(row)
            self.store.audit.append(cadet.ref, "courses_registered",
                                    cadet.npa_number,
                                    {"courses": sorted(course_codes)})
        return created

    def list_registered_cadets(self, staff_principal: Principal,
                               course_code: str, session_year: int) -> list[Cadet]:
        course = self.store.courses.get_any(course_code)
        assignment = self.store.assignments.get(course_code, session_year)
        require(staff_principal, Action.LIST_REGISTERED_CADETS, ResourceScope(
            department=course.dept_name,
            assigned_staff_id=assignment.staff_id if assignment else None,
        ))
        regs = self.store.registrations.list_for_course(course_code, session_year)
        return [self.store.cadets.get(r.cadet_id) for r in regs]

    # -- scores -------------------------------------------------------------------

    def upload_scores(self, staff_principal: Principal, course_code: str,
                      session_year: int,
                      rows: list[tuple[str, float]]) -> ScoreUploadReport:
        course = self.store.courses.get_any(course_code)
        assignment = self.store.assignments.get(course_code, session_year)
        require(staff_principal, Action.UPLOAD_SCORES, ResourceScope(
            department=course.dept_name,
            assigned_staff_id=assignment.staff_id if assignment else None,
        ))
        accepted: list[AcceptedScore] = []
        rejected: list[RejectedScoreRow] = []
        for raw_npa, total in rows:
            try:
                npa = parse_npa_number(raw_npa)
            except MalformedNpaNumber:
                rejected.append(RejectedScoreRow(raw_npa, "malformed_npa_number"))
                continue
            cadet = self.store.cadets.get_by_npa(npa)
            if cadet is None or not self.store.registrations.exists(
                cadet.id, course_code, session_year
            ):
                rejected.append(RejectedScoreRow(npa, "not_registered"))
                continue
            try:
                total_value = float(total)
            except (TypeError, ValueError):
                rejected.append(RejectedScoreRow(npa, "score_out_of_range"))
                continue
            if not 0 <= total_value <= 100:
                rejected.append(RejectedScoreRow(npa, "score_out_of_range"))
                continue
            grade = grade_of(total_value)
            registration = next(
                r for r in self.store.registrations.list_for_cadet(cadet.id, session_year)
                if r.course_code == course_code
            )
            with self.store.transaction():
                stored, prior = self.store.scores.upsert(Score(
                    cadet_id=cadet.id,
                    course_code=course_code,
                    session_year=session_year,
                    semester=registration.semester,
                    total=total_value,
                    grade=grade,
                    uploaded_by=staff_principal.id,
                ))
                self.store.audit.append(
                    staff_principal.ref, "score_uploaded", f"{npa}/{course_code}",
                    {"total": total_value, "grade": grade,
                     "prior_total": prior.total if prior else None},
                )
            accepted.append(AcceptedScore(npa, total_value, grade))
        return ScoreUploadReport(accepted=accepted, rejected=rejected)

    def view_results(self, cadet: Cadet) -> list[ResultRow]:
        regs = self.store.registrations.list_for_cadet(cadet.id)
        scores = {
            (s.course_code, s.session_year): s
            for s in self.store.scores.list_for_cadet(cadet.id)
        }
        rows = []
        for reg in regs:
            course = self.store.courses.get_any(reg.course_code)
            score = scores.get((reg.course_code, reg.session_year))
            rows.append(ResultRow(
                course_code=reg.course_code,
                course_title=course.course_title,
                session_year=reg.session_year,
                semester=reg.semester,
                unit=course.unit,
                total=score.total if score else None,
                grade=score.grade if score else None,
            ))
        return rows

    def department_results(self, issuer: Principal, session_year: int) -> list[Score]:
        require(issuer, Action.VIEW_DEPARTMENT_RESULTS,
                ResourceScope(department=issuer.department))
        return self.store.scores.list_for_department(issuer.department, session_year)

    # -- materials ------------------------------------------------------------------

    def upload_material(self, staff_principal: Principal, course_code: str,
                        original_filename: str, content: bytes) -> Material:
        course = self.store.courses.get(course_code)
        session = self.store.academic_sessions.get_current()
        assignment = self.store.assignments.get(course_code, session.year)
        require(staff_principal, Action.UPLOAD_MATERIAL, ResourceScope(
            department=course.dept_name,
            assigned_staff_id=assignment.staff_id if assignment else None,
        ))
        if len(content) > self.max_material_bytes:
            raise FileTooLarge()
        kind = self._media_kind_of(original_filename)
        stored_name = secrets.token_hex(16)
        self.materials_dir.mkdir(parents=True, exist_ok=True)
        path = (self.materials_dir / stored_name).resolve()
        if path.parent != self.materials_dir.resolve():
            raise ValidationFailed("material path escaped the storage root")
        path.write_bytes(content)
        try:
            with self.store.transaction():
                material = self.store.materials.insert(Material(
                    course_code=course_code,
                    original_filename=original_filename,
                    stored_name=stored_name,
                    size_bytes=len(content),
                    media_kind=kind,
                    uploaded_by=staff_principal.id,
                ))
                self.store.audit.append(staff_principal.ref, "material_uploaded",
                                        course_code,
                                        {"material_id": material.id,
                                         "size": len(content)})
        except BaseException:
            path.unlink(missing_ok=True)
            raise
        return material

    @staticmethod
    def _media_kind_of(filename: str) -> MediaKind:
        suffix = filename.rsplit(".", 1)[-1].lower() if "." in filename else ""
        try:
            return MediaKind(suffix)
        except ValueError:
            raise DisallowedType(f"file type not allowed: .{suffix}") from None

    def list_materials_for_cadet(self, cadet: Cadet) -> list[Material]:
        return self.store.materials.list_for_cadet(cadet.id)

    def list_materials_for_course(self, staff_principal: Principal,
                                  course_code: str) -> list[Material]:
        course = self.store.courses.get_any(course_code)
        if staff_principal.department != course.dept_name:
            raise Unauthorized()
        return self.store.materials.list_for_course(course_code)

    def get_material_content(self, principal: Principal,
                             material_id: int) -> tuple[Material, bytes]:
        """Cadets need a registration for the course; department staff may
        also read (service-level capability, not exposed per the matrix)."""
        material = self.store.materials.get(material_id)
        course = self.store.courses.get_any(material.course_code)
        if principal.realm == Realm.CADET:
            registered = self.store.registrations.any_for_course(
                principal.id, material.course_code
            )
            require(principal, Action.DOWNLOAD_MATERIALS,
                    ResourceScope(cadet_registered=registered))
        elif principal.realm == Realm.STAFF:
            if principal.department != course.dept_name:
                raise Unauthorized()
        else:
            raise Unauthorized()
        path = (self.materials_dir / material.stored_name).resolve()
        if path.parent != self.materials_dir.resolve() or not path.exists():
            raise NotFound("material content missing")
        return material, path.read_bytes()

    # -- events ------------------------------------------------------------------

    def create_event(self, issuer: Principal, title: str, body: str,
                     event_date: str) -> Event:
        require(issuer, Action.CREATE_EVENT)
        with self.store.transaction():
            event = self.store.events.insert(Event(
                title=title, body=body, event_date=event_date, created_by=issuer.id,
            ))
            self.store.audit.append(issuer.ref, "event_created", title,
                                    {"event_id": event.id})
        return event

    def list_events(self) -> list[Event]:
        return self.store.events.list()
