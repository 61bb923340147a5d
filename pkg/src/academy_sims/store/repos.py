"""Entity repositories over the SQLite store.

One repository per entity type; round-trip fidelity is the contract
(get(insert(e).id) structurally equals e, timestamps set by the store).
"""

from __future__ import annotations

from dataclasses import replace
from sqlite3 import Row

from ..domain import (
    AcademicSession,
    Admin,
    Cadet,
    Course,
    CourseAssignment,
    CourseRegistration,
    Department,
    Designation,
    Event,
    Faculty,
    Material,
    MediaKind,
    NpaRosterEntry,
    PinRole,
    PrincipalRef,
    Realm,
    RegistrationPin,
    Score,
    Semester,
    Sex,
    Staff,
)
from ..errors import (
    DuplicateKey,
    NotFound,
    NpaAlreadyClaimed,
    NpaNotOnRoster,
    PinAlreadyConsumed,
    PinNotFound,
    PinScopeMismatch,
)
from .base import StoreBase, from_iso, iso


class RepoBase:
    def __init__(self, db: StoreBase):
        self.db = db


# ---------------------------------------------------------------------------
# principals
# ---------------------------------------------------------------------------


def _admin_from_row(row: Row) -> Admin:
    return Admin(
        id=row["id"],
        name=row["name"],
        email=row["email"],
        passport=row["passport"],
        password_hash=row["password_hash"],
        remember_token=row["remember_token"],
        created_at=from_iso(row["created_at"]),
        updated_at=from_iso(row["updated_at"]),
    )


class AdminRepo(RepoBase):
    def insert(self, admin: Admin) -> Admin:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "INSERT INTO admins (name, email, passport, password_hash,"
                " remember_token, created_at, updated_at) VALUES (?, ?, ?, ?, ?, ?, ?)",
                (admin.name, admin.email, admin.passport, admin.password_hash,
                 admin.remember_token, iso(now), iso(now)),
            )
            return replace(admin, id=cur.lastrowid, created_at=now, updated_at=now)

    def get(self, admin_id: int) -> Admin:
        row = self.db.query_one("SELECT * FROM admins WHERE id = ?", (admin_id,))
        if row is None:
            raise NotFound("admin not found")
        return _admin_from_row(row)

    def get_by_email(self, email: str) -> Admin | None:
        row = self.db.query_one("SELECT * FROM admins WHERE email = ?", (email,))
        return _admin_from_row(row) if row else None

    def update(self, admin: Admin) -> Admin:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE admins SET name = ?, email = ?, passport = ?,"
                " password_hash = ?, remember_token = ?, updated_at = ? WHERE id = ?",
                (admin.name, admin.email, admin.passport, admin.password_hash,
                 admin.remember_token, iso(now), admin.id),
            )
            if cur.rowcount == 0:
                raise NotFound("admin not found")
        return replace(admin, updated_at=now)

    def list(self) -> list[Admin]:
        return [_admin_from_row(r) for r in self.db.query_all("SELECT * FROM admins ORDER BY id")]


def _staff_from_row(row: Row) -> Staff:
    return Staff(
        id=row["id"],
        sur_name=row["sur_name"],
        first_name=row["first_name"],
        faculty=row["faculty"],
        department=row["department"],
        pin=row["pin"],
        passport=row["passport"],
        cv=row["cv"],
        designation=Designation(row["designation"]) if row["designation"] else None,
        address=row["address"],
        email=row["email"],
        dob=row["dob"],
        password_hash=row["password_hash"],
        remember_token=row["remember_token"],
        created_at=from_iso(row["created_at"]),
        updated_at=from_iso(row["updated_at"]),
    )


class StaffRepo(RepoBase):
    def insert(self, staff: Staff) -> Staff:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "INSERT INTO staff (sur_name, first_name, faculty, department, pin,"
                " passport, cv, designation, address, email, dob, password_hash,"
                " remember_token, created_at, updated_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (staff.sur_name, staff.first_name, staff.faculty, staff.department,
                 staff.pin, staff.passport, staff.cv,
                 staff.designation.value if staff.designation else None,
                 staff.address, staff.email, staff.dob, staff.password_hash,
                 staff.remember_token, iso(now), iso(now)),
            )
            return replace(staff, id=cur.lastrowid, created_at=now, updated_at=now)

    def get(self, staff_id: int) -> Staff:
        row = self.db.query_one("SELECT * FROM staff WHERE id = ?", (staff_id,))
        if row is None:
            raise NotFound("staff not found")
        return _staff_from_row(row)

    def get_by_email(self, email: str) -> Staff | None:
        row = self.db.query_one("SELECT * FROM staff WHERE email = ?", (email,))
        return _staff_from_row(row) if row else None

    def update(self, staff: Staff) -> Staff:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE staff SET sur_name = ?, first_name = ?, faculty = ?,"
                " department = ?, pin = ?, passport = ?, cv = ?, designation = ?,"
                " address = ?, email = ?, dob = ?, password_hash = ?,"
                " remember_token = ?, updated_at = ? WHERE id = ?",
                (staff.sur_name, staff.first_name, staff.faculty, staff.department,
                 staff.pin, staff.passport, staff.cv,
                 staff.designation.value if staff.designation else None,
                 staff.address, staff.email, staff.dob, staff.password_hash,
                 staff.remember_token, iso(now), staff.id),
            )
            if cur.rowcount == 0:
                raise NotFound("staff not found")
        return replace(staff, updated_at=now)

    def list(self, department: str | None = None) -> list[Staff]:
        if department is None:
            rows = self.db.query_all("SELECT * FROM staff ORDER BY id")
        else:
            rows = self.db.query_all(
                "SELECT * FROM staff WHERE department = ? ORDER BY id", (department,)
            )
        return [_staff_from_row(r) for r in rows]

    def head_of(self, department: str) -> Staff | None:
        row = self.db.query_one(
            "SELECT * FROM staff WHERE department = ? AND designation = ? LIMIT 1",
            (department, Designation.HOD.value),
        )
        return _staff_from_row(row) if row else None


def _cadet_from_row(row: Row) -> Cadet:
    return Cadet(
        id=row["id"],
        sur_name=row["sur_name"],
        first_name=row["first_name"],
        middle_name=row["middle_name"],
        npa_number=row["npa_number"],
        pin=row["pin"],
        email=row["email"],
        rc=row["rc"],
        faculty=row["faculty"],
        department=row["department"],
        level=row["level"],
        semester=Semester(row["semester"]),
        squad=row["squad"],
        sex=Sex(row["sex"]),
        dob=row["dob"],
        home_town=row["home_town"],
        local_govt=row["local_govt"],
        state=row["state"],
        address=row["address"],
        next_of_kin_sur_name=row["next_of_kin_sur_name"],
        next_of_kin_first_name=row["next_of_kin_first_name"],
        next_of_kin_relationship=row["next_of_kin_relationship"],
        next_of_kin_address=row["next_of_kin_address"],
        passport=row["passport"],
        password_hash=row["password_hash"],
        remember_token=row["remember_token"],
        created_at=from_iso(row["created_at"]),
        updated_at=from_iso(row["updated_at"]),
    )


class CadetRepo(RepoBase):
    _COLUMNS = (
        "sur_name, first_name, middle_name, npa_number, pin, email, rc, faculty,"
        " department, level, semester, squad, sex, dob, home_town, local_govt,"
        " state, address, next_of_kin_sur_name, next_of_kin_first_name,"
        " next_of_kin_relationship, next_of_kin_address, passport, password_hash,"
        " remember_token"
    )

    @staticmethod
    def _params(c: Cadet) -> tuple:
        return (
            c.sur_name, c.first_name, c.middle_name, c.npa_number, c.pin, c.email,
            c.rc, c.faculty, c.department, c.level, c.semester.value, c.squad,
            c.sex.value, c.dob, c.home_town, c.local_govt, c.state, c.address,
            c.next_of_kin_sur_name, c.next_of_kin_first_name,
            c.next_of_kin_relationship, c.next_of_kin_address, c.passport,
            c.password_hash, c.remember_token,
        )

    def insert(self, cadet: Cadet) -> Cadet:
        now = self.db.now()
        placeholders = ", ".join("?" * 27)
        with self.db.transaction():
            cur = self.db.execute(
                f"INSERT INTO cadets ({self._COLUMNS}, created_at, updated_at)"
                f" VALUES ({placeholders})",
                self._params(cadet) + (iso(now), iso(now)),
            )
            return replace(cadet, id=cur.lastrowid, created_at=now, updated_at=now)

    def get(self, cadet_id: int) -> Cadet:
        row = self.db.query_one("SELECT * FROM cadets WHERE id = ?", (cadet_id,))
        if row is None:
            raise NotFound("cadet not found")
        return _cadet_from_row(row)

    def get_by_email(self, email: str) -> Cadet | None:
        row = self.db.query_one("SELECT * FROM cadets WHERE email = ?", (email,))
        return _cadet_from_row(row) if row else None

    def get_by_npa(self, npa_number: str) -> Cadet | None:
        row = self.db.query_one(
            "SELECT * FROM cadets WHERE npa_number = ?", (npa_number,)
        )
        return _cadet_from_row(row) if row else None

    def update(self, cadet: Cadet) -> Cadet:
        now = self.db.now()
        assignments = ", ".join(
            f"{col.strip()} = ?" for col in self._COLUMNS.split(",")
        )
        with self.db.transaction():
            cur = self.db.execute(
                f"UPDATE cadets SET {assignments}, updated_at = ? WHERE id = ?",
                self._params(cadet) + (iso(now), cadet.id),
            )
            if cur.rowcount == 0:
                raise NotFound("cadet not found")
        return replace(cadet, updated_at=now)

    def list(self, department: str | None = None) -> list[Cadet]:
        if department is None:
            rows = self.db.query_all("SELECT * FROM cadets ORDER BY id")
        else:
            rows = self.db.query_all(
                "SELECT * FROM cadets WHERE department = ? ORDER BY id", (department,)
            )
        return [_cadet_from_row(r) for r in rows]


# ---------------------------------------------------------------------------
# faculties / departments
# ---------------------------------------------------------------------------


class FacultyRepo(RepoBase):
    def insert(self, faculty: Faculty) -> Faculty:
        now = self.db.now()
        with self.db.transaction():
            existing = self.db.query_one(
                "SELECT * FROM faculties WHERE name = ?", (faculty.name,)
            )
            if existing is not None:
                if existing["deleted_at"] is None:
                    raise DuplicateKey("duplicate value for faculties.name")
                # re-creating a soft-deleted name revives the row
                self.db.execute(
                    "UPDATE faculties SET deleted_at = NULL, updated_at = ? WHERE name = ?",
                    (iso(now), faculty.name),
                )
                return replace(faculty, created_at=from_iso(existing["created_at"]),
                               updated_at=now, deleted_at=None)
            self.db.execute(
                "INSERT INTO faculties (name, created_at, updated_at) VALUES (?, ?, ?)",
                (faculty.name, iso(now), iso(now)),
            )
            return replace(faculty, created_at=now, updated_at=now)

    def get(self, name: str) -> Faculty:
        row = self.db.query_one(
            "SELECT * FROM faculties WHERE name = ? AND deleted_at IS NULL", (name,)
        )
        if row is None:
            raise NotFound("faculty not found")
        return Faculty(name=row["name"], created_at=from_iso(row["created_at"]),
                       updated_at=from_iso(row["updated_at"]), deleted_at=None)

    def list(self, include_deleted: bool = False) -> list[Faculty]:
        sql = "SELECT * FROM faculties"
        if not include_deleted:
            sql += " WHERE deleted_at IS NULL"
        return [
            Faculty(name=r["name"], created_at=from_iso(r["created_at"]),
                    updated_at=from_iso(r["updated_at"]),
                    deleted_at=from_iso(r["deleted_at"]))
            for r in self.db.query_all(sql + " ORDER BY name")
        ]

    def soft_delete(self, name: str) -> None:
        now_text = self.db.now_iso()
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE faculties SET deleted_at = ?, updated_at = ?"
                " WHERE name = ? AND deleted_at IS NULL",
                (now_text, now_text, name),
            )
            if cur.rowcount == 0:
                raise NotFound("faculty not found")


class DepartmentRepo(RepoBase):
    def insert(self, department: Department) -> Department:
        now = self.db.now()
        with self.db.transaction():
            live_faculty = self.db.query_one(
                "SELECT name FROM faculties WHERE name = ? AND deleted_at IS NULL",
                (department.faculty_name,),
            )
            if live_faculty is None:
                raise NotFound("faculty not found")
            self.db.execute(
                "INSERT INTO departments (name, faculty_name, created_at, updated_at)"
                " VALUES (?, ?, ?, ?)",
                (department.name, department.faculty_name, iso(now), iso(now)),
            )
            return replace(department, created_at=now, updated_at=now)

    def get(self, name: str) -> Department:
        row = self.db.query_one(
            "SELECT * FROM departments WHERE name = ? AND deleted_at IS NULL", (name,)
        )
        if row is None:
            raise NotFound("department not found")
        return Department(
            name=row["name"], faculty_name=row["faculty_name"],
            created_at=from_iso(row["created_at"]),
            updated_at=from_iso(row["updated_at"]),
        )

    def list(self, faculty: str | None = None) -> list[Department]:
        if faculty is None:
            rows = self.db.query_all(
                "SELECT * FROM departments WHERE deleted_at IS NULL ORDER BY name"
            )
        else:
            rows = self.db.query_all(
                "SELECT * FROM departments WHERE faculty_name = ? AND deleted_at IS NULL"
                " ORDER BY name",
                (faculty,),
            )
        return [
            Department(name=r["name"], faculty_name=r["faculty_name"],
                       created_at=from_iso(r["created_at"]),
                       updated_at=from_iso(r["updated_at"]))
            for r in rows
        ]


# ---------------------------------------------------------------------------
# courses
# ---------------------------------------------------------------------------


def _course_from_row(row: Row) -> Course:
    return Course(
        course_code=row["course_code"],
        course_title=row["course_title"],
        dept_name=row["dept_name"],
        level=row["level"],
        unit=row["unit"],
        semester=Semester(row["semester"]),
        year=row["year"],
        created_at=from_iso(row["created_at"]),
        updated_at=from_iso(row["updated_at"]),
        deleted_at=from_iso(row["deleted_at"]),
    )


class CourseRepo(RepoBase):
    def insert(self, course: Course) -> Course:
        """Create a course. A soft-deleted row under the same code is revived
        with the new attributes; old registrations keep joining to the code."""
        now = self.db.now()
        with self.db.transaction():
            existing = self.db.query_one(
                "SELECT * FROM courses WHERE course_code = ?", (course.course_code,)
            )
            if existing is not None and existing["deleted_at"] is None:
                raise DuplicateKey("duplicate value for courses.course_code")
            if existing is not None:
                self.db.execute(
                    "UPDATE courses SET course_title = ?, dept_name = ?, level = ?,"
                    " unit = ?, semester = ?, year = ?, deleted_at = NULL,"
                    " updated_at = ? WHERE course_code = ?",
                    (course.course_title, course.dept_name, course.level, course.unit,
                     course.semester.value, course.year, iso(now), course.course_code),
                )
                return replace(course, created_at=from_iso(existing["created_at"]),
                               updated_at=now, deleted_at=None)
            self.db.execute(
                "INSERT INTO courses (course_code, course_title, dept_name, level,"
                " unit, semester, year, created_at, updated_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (course.course_code, course.course_title, course.dept_name,
                 course.level, course.unit, course.semester.value, course.year,
                 iso(now), iso(now)),
            )
            return replace(course, created_at=now, updated_at=now)

    def get(self, course_code: str) -> Course:
        row = self.db.query_one(
            "SELECT * FROM courses WHERE course_code = ? AND deleted_at IS NULL",
            (course_code,),
        )
        if row is None:
            raise NotFound("course not found")
        return _course_from_row(row)

    def get_any(self, course_code: str) -> Course:
        """Including soft-deleted rows, for joins against historical records."""
        row = self.db.query_one(
            "SELECT * FROM courses WHERE course_code = ?", (course_code,)
        )
        if row is None:
            raise NotFound("course not found")
        return _course_from_row(row)

    def update(self, course: Course) -> Course:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE courses SET course_title = ?, dept_name = ?, level = ?,"
                " unit = ?, semester = ?, year = ?, updated_at = ?"
                " WHERE course_code = ? AND deleted_at IS NULL",
                (course.course_title, course.dept_name, course.level, course.unit,
                 course.semester.value, course.year, iso(now), course.course_code),
            )
            if cur.rowcount == 0:
                raise NotFound("course not found")
        return replace(course, updated_at=now)

    def soft_delete(self, course_code: str) -> None:
        now_text = self.db.now_iso()
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE courses SET deleted_at = ?, updated_at = ?"
                " WHERE course_code = ? AND deleted_at IS NULL",
                (now_text, now_text, course_code),
            )
            if cur.rowcount == 0:
                raise NotFound("course not found")

    def list(self, department: str | None = None, include_deleted: bool = False) -> list[Course]:
        clauses, params = [], []
        if not include_deleted:
            clauses.append("deleted_at IS NULL")
        if department is not None:
            clauses.append("dept_name = ?")
            params.append(department)
        sql = "SELECT * FROM courses"
        if clauses:
            sql += " WHERE " + " AND ".join(clauses)
        sql += " ORDER BY course_code"
        return [_course_from_row(r) for r in self.db.query_all(sql, tuple(params))]

    def eligible(self, department: str, level: int, semester: Semester, year: int) -> list[Course]:
        rows = self.db.query_all(
            "SELECT * FROM courses WHERE deleted_at IS NULL AND dept_name = ?"
            " AND level = ? AND semester = ? AND year = ? ORDER BY course_code",
            (department, level, semester.value, year),
        )
        return [_course_from_row(r) for r in rows]


# ---------------------------------------------------------------------------
# registration pins / NPA roster
# ---------------------------------------------------------------------------


def _pin_from_row(row: Row) -> RegistrationPin:
    consumed_by = None
    if row["consumed_by_realm"] is not None:
        consumed_by = PrincipalRef(Realm(row["consumed_by_realm"]), row["consumed_by_id"])
    return RegistrationPin(
        pin_code=row["pin_code"],
        target_role=PinRole(row["target_role"]),
        department=row["department"],
        consumed=bool(row["consumed"]),
        consumed_by=consumed_by,
        created_by=PrincipalRef(Realm(row["created_by_realm"]), row["created_by_id"]),
        created_at=from_iso(row["created_at"]),
    )


class PinRepo(RepoBase):
    def insert(self, pin: RegistrationPin) -> RegistrationPin:
        now = self.db.now()
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO registration_pins (pin_code, target_role, department,"
                " consumed, consumed_by_realm, consumed_by_id, created_by_realm,"
                " created_by_id, created_at) VALUES (?, ?, ?, 0, NULL, NULL, ?, ?, ?)",
                (pin.pin_code, pin.target_role.value, pin.department,
                 pin.created_by.realm.value, pin.created_by.id, iso(now)),
            )
        return replace(pin, created_at=now)

    def get(self, pin_code: str) -> RegistrationPin:
        row = self.db.query_one(
            "SELECT * FROM registration_pins WHERE pin_code = ?", (pin_code,)
        )
        if row is None:
            raise PinNotFound()
        return _pin_from_row(row)

    def list(self, target_role: PinRole | None = None, department: str | None = None) -> list[RegistrationPin]:
        clauses, params = [], []
        if target_role is not None:
            clauses.append("target_role = ?")
            params.append(target_role.value)
        if department is not None:
            clauses.append("department = ?")
            params.append(department)
        sql = "SELECT * FROM registration_pins"
        if clauses:
            sql += " WHERE " + " AND ".join(clauses)
        sql += " ORDER BY created_at, pin_code"
        return [_pin_from_row(r) for r in self.db.query_all(sql, tuple(params))]

    def count_consumed(self, target_role: PinRole, department: str) -> int:
        row = self.db.query_one(
            "SELECT COUNT(*) AS n FROM registration_pins"
            " WHERE target_role = ? AND department = ? AND consumed = 1",
            (target_role.value, department),
        )
        return row["n"]

    def redeem_atomically(
        self,
        pin_code: str,
        claimant: PrincipalRef,
        target_role: PinRole,
        department: str | None = None,
    ) -> RegistrationPin:
        """Compare-and-set consumption: exactly one concurrent claimant can
        ever flip consumed false->true. Role (and department, when the
        claimant declares one) must match the pin's scope."""
        with self.db.transaction():
            sql = (
                "UPDATE registration_pins SET consumed = 1, consumed_by_realm = ?,"
                " consumed_by_id = ? WHERE pin_code = ? AND consumed = 0"
                " AND target_role = ?"
            )
            params: list = [claimant.realm.value, claimant.id, pin_code, target_role.value]
            if department is not None:
                sql += " AND department = ?"
                params.append(department)
            cur = self.db.execute(sql, tuple(params))
            if cur.rowcount == 1:
                return self.get(pin_code)
            row = self.db.query_one(
                "SELECT * FROM registration_pins WHERE pin_code = ?", (pin_code,)
            )
            if row is None:
                raise PinNotFound()
            if row["consumed"]:
                raise PinAlreadyConsumed()
            raise PinScopeMismatch()


class RosterRepo(RepoBase):
    def add(self, entry: NpaRosterEntry) -> NpaRosterEntry:
        now = self.db.now()
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO npa_roster (npa_number, department, claimed, claimed_by,"
                " created_at) VALUES (?, ?, 0, NULL, ?)",
                (entry.npa_number, entry.department, iso(now)),
            )
        return replace(entry, created_at=now)

    def get(self, npa_number: str) -> NpaRosterEntry | None:
        row = self.db.query_one(
            "SELECT * FROM npa_roster WHERE npa_number = ?", (npa_number,)
        )
        if row is None:
            return None
        return NpaRosterEntry(
            npa_number=row["npa_number"], department=row["department"],
            claimed=bool(row["claimed"]), claimed_by=row["claimed_by"],
            created_at=from_iso(row["created_at"]),
        )

    def list(self, department: str | None = None) -> list[NpaRosterEntry]:
        if department is None:
            rows = self.db.query_all("SELECT * FROM npa_roster ORDER BY npa_number")
        else:
            rows = self.db.query_all(
                "SELECT * FROM npa_roster WHERE department = ? ORDER BY npa_number",
                (department,),
            )
        return [
            NpaRosterEntry(npa_number=r["npa_number"], department=r["department"],
                           claimed=bool(r["claimed"]), claimed_by=r["claimed_by"],
                           created_at=from_iso(r["created_at"]))
            for r in rows
        ]

    def claim_atomically(self, npa_number: str, department: str, cadet_id: int) -> None:
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE npa_roster SET claimed = 1, claimed_by = ?"
                " WHERE npa_number = ? AND department = ? AND claimed = 0",
                (cadet_id, npa_number, department),
            )
            if cur.rowcount == 1:
                return
            row = self.db.query_one(
                "SELECT claimed FROM npa_roster WHERE npa_number = ? AND department = ?",
                (npa_number, department),
            )
            if row is None:
                raise NpaNotOnRoster()
            raise NpaAlreadyClaimed()


# ---------------------------------------------------------------------------
# assignments / registrations / scores
# ---------------------------------------------------------------------------


def _assignment_from_row(row: Row) -> CourseAssignment:
    return CourseAssignment(
        id=row["id"], course_code=row["course_code"], staff_id=row["staff_id"],
        session_year=row["session_year"], created_at=from_iso(row["created_at"]),
        updated_at=from_iso(row["updated_at"]),
    )


class AssignmentRepo(RepoBase):
    def upsert(self, course_code: str, staff_id: int, session_year: int) -> CourseAssignment:
        """At most one lecturer per (course, session); reassignment replaces."""
        now_text = self.db.now_iso()
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO course_assignments (course_code, staff_id, session_year,"
                " created_at, updated_at) VALUES (?, ?, ?, ?, ?)"
                " ON CONFLICT (course_code, session_year)"
                " DO UPDATE SET staff_id = excluded.staff_id, updated_at = excluded.updated_at",
                (course_code, staff_id, session_year, now_text, now_text),
            )
            row = self.db.query_one(
                "SELECT * FROM course_assignments WHERE course_code = ? AND session_year = ?",
                (course_code, session_year),
            )
        return _assignment_from_row(row)

    def get(self, course_code: str, session_year: int) -> CourseAssignment | None:
        row = self.db.query_one(
            "SELECT * FROM course_assignments WHERE course_code = ? AND session_year = ?",
            (course_code, session_year),
        )
        return _assignment_from_row(row) if row else None

    def list_for_staff(self, staff_id: int, session_year: int) -> list[CourseAssignment]:
        rows = self.db.query_all(
            "SELECT * FROM course_assignments WHERE staff_id = ? AND session_year = ?"
            " ORDER BY course_code",
            (staff_id, session_year),
        )
        return [_assignment_from_row(r) for r in rows]


class RegistrationRepo(RepoBase):
    def add_if_absent(self, reg: CourseRegistration) -> CourseRegistration | None:
        """Insert unless the (cadet, course, session) row already exists;
        returns None on replay so callers stay idempotent."""
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "INSERT INTO course_registrations (cadet_id, course_code,"
                " session_year, semester, created_at) VALUES (?, ?, ?, ?, ?)"
                " ON CONFLICT (cadet_id, course_code, session_year) DO NOTHING",
                (reg.cadet_id, reg.course_code, reg.session_year,
                 reg.semester.value, iso(now)),
            )
            if cur.rowcount == 0:
                return None
            return replace(reg, id=cur.lastrowid, created_at=now)

    def exists(self, cadet_id: int, course_code: str, session_year: int) -> bool:
        return self.db.query_one(
            "SELECT 1 FROM course_registrations WHERE cadet_id = ? AND course_code = ?"
            " AND session_year = ?",
            (cadet_id, course_code, session_year),
        ) is not None

    def any_for_course(self, cadet_id: int, course_code: str) -> bool:
        return self.db.query_one(
            "SELECT 1 FROM course_registrations WHERE cadet_id = ? AND course_code = ?",
            (cadet_id, course_code),
        ) is not None

    def list_for_cadet(self, cadet_id: int, session_year: int | None = None) -> list[CourseRegistration]:
        if session_year is None:
            rows = self.db.query_all(
                "SELECT * FROM course_registrations WHERE cadet_id = ? ORDER BY course_code",
                (cadet_id,),
            )
        else:
            rows = self.db.query_all(
                "SELECT * FROM course_registrations WHERE cadet_id = ? AND session_year = ?"
                " ORDER BY course_code",
                (cadet_id, session_year),
            )
        return [self._from_row(r) for r in rows]

    def list_for_course(self, course_code: str, session_year: int) -> list[CourseRegistration]:
        rows = self.db.query_all(
            "SELECT * FROM course_registrations WHERE course_code = ? AND session_year = ?"
            " ORDER BY cadet_id",
            (course_code, session_year),
        )
        return [self._from_row(r) for r in rows]

    def all(self) -> list[CourseRegistration]:
        return [self._from_row(r) for r in self.db.query_all("SELECT * FROM course_registrations")]

    @staticmethod
    def _from_row(row: Row) -> CourseRegistration:
        return CourseRegistration(
            id=row["id"], cadet_id=row["cadet_id"], course_code=row["course_code"],
            session_year=row["session_year"], semester=Semester(row["semester"]),
            created_at=from_iso(row["created_at"]),
        )


def _score_from_row(row: Row) -> Score:
    return Score(
        id=row["id"], cadet_id=row["cadet_id"], course_code=row["course_code"],
        session_year=row["session_year"], semester=Semester(row["semester"]),
        total=row["total"], grade=row["grade"], uploaded_by=row["uploaded_by"],
        created_at=from_iso(row["created_at"]), updated_at=from_iso(row["updated_at"]),
    )


class ScoreRepo(RepoBase):
    def upsert(self, score: Score) -> tuple[Score, Score | None]:
        """Re-upload overwrites; returns (stored, prior) so callers can audit
        the replaced values."""
        now_text = self.db.now_iso()
        with self.db.transaction():
            prior_row = self.db.query_one(
                "SELECT * FROM scores WHERE cadet_id = ? AND course_code = ?"
                " AND session_year = ?",
                (score.cadet_id, score.course_code, score.session_year),
            )
            prior = _score_from_row(prior_row) if prior_row else None
            self.db.execute(
                "INSERT INTO scores (cadet_id, course_code, session_year, semester,"
                " total, grade, uploaded_by, created_at, updated_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?)"
                " ON CONFLICT (cadet_id, course_code, session_year) DO UPDATE SET"
                " semester = excluded.semester, total = excluded.total,"
                " grade = excluded.grade, uploaded_by = excluded.uploaded_by,"
                " updated_at = excluded.updated_at",
                (score.cadet_id, score.course_code, score.session_year,
                 score.semester.value, score.total, score.grade, score.uploaded_by,
                 now_text, now_text),
            )
            row = self.db.query_one(
                "SELECT * FROM scores WHERE cadet_id = ? AND course_code = ?"
                " AND session_year = ?",
                (score.cadet_id, score.course_code, score.session_year),
            )
        return _score_from_row(row), prior

    def list_for_cadet(self, cadet_id: int) -> list[Score]:
        rows = self.db.query_all(
            "SELECT * FROM scores WHERE cadet_id = ? ORDER BY course_code", (cadet_id,)
        )
        return [_score_from_row(r) for r in rows]

    def list_for_course(self, course_code: str, session_year: int) -> list[Score]:
        rows = self.db.query_all(
            "SELECT * FROM scores WHERE course_code = ? AND session_year = ?"
            " ORDER BY cadet_id",
            (course_code, session_year),
        )
        return [_score_from_row(r) for r in rows]

    def list_for_department(self, department: str, session_year: int) -> list[Score]:
        rows = self.db.query_all(
            "SELECT s.* FROM scores s JOIN courses c ON c.course_code = s.course_code"
            " WHERE c.dept_name = ? AND s.session_year = ? ORDER BY s.course_code, s.cadet_id",
            (department, session_year),
        )
        return [_score_from_row(r) for r in rows]


# ---------------------------------------------------------------------------
# materials / events
# ---------------------------------------------------------------------------


def _material_from_row(row: Row) -> Material:
    return Material(
        id=row["id"], course_code=row["course_code"],
        original_filename=row["original_filename"], stored_name=row["stored_name"],
        size_bytes=row["size_bytes"], media_kind=MediaKind(row["media_kind"]),
        uploaded_by=row["uploaded_by"], created_at=from_iso(row["created_at"]),
    )


class MaterialRepo(RepoBase):
    def insert(self, material: Material) -> Material:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "INSERT INTO materials (course_code, original_filename, stored_name,"
                " size_bytes, media_kind, uploaded_by, created_at)"
                " VALUES (?, ?, ?, ?, ?, ?, ?)",
                (material.course_code, material.original_filename,
                 material.stored_name, material.size_bytes,
                 material.media_kind.value, material.uploaded_by, iso(now)),
            )
            return replace(material, id=cur.lastrowid, created_at=now)

    def get(self, material_id: int) -> Material:
        row = self.db.query_one("SELECT * FROM materials WHERE id = ?", (material_id,))
        if row is None:
            raise NotFound("material not found")
        return _material_from_row(row)

    def list_for_course(self, course_code: str) -> list[Material]:
        rows = self.db.query_all(
            "SELECT * FROM materials WHERE course_code = ? ORDER BY id", (course_code,)
        )
        return [_material_from_row(r) for r in rows]

    def list_for_cadet(self, cadet_id: int) -> list[Material]:
        rows = self.db.query_all(
            "SELECT m.* FROM materials m WHERE m.course_code IN"
            " (SELECT course_code FROM course_registrations WHERE cadet_id = ?)"
            " ORDER BY m.id",
            (cadet_id,),
        )
        return [_material_from_row(r) for r in rows]


class EventRepo(RepoBase):
    def insert(self, event: Event) -> Event:
        now = self.db.now()
        with self.db.transaction():
            cur = self.db.execute(
                "INSERT INTO events (title, body, event_date, created_by, created_at,"
                " updated_at) VALUES (?, ?, ?, ?, ?, ?)",
                (event.title, event.body, event.event_date, event.created_by,
                 iso(now), iso(now)),
            )
            return replace(event, id=cur.lastrowid, created_at=now, updated_at=now)

    def list(self) -> list[Event]:
        rows = self.db.query_all("SELECT * FROM events ORDER BY created_at DESC, id DESC")
        return [
            Event(id=r["id"], title=r["title"], body=r["body"],
                  event_date=r["event_date"], created_by=r["created_by"],
                  created_at=from_iso(r["created_at"]), updated_at=from_iso(r["updated_at"]))
            for r in rows
        ]


# ---------------------------------------------------------------------------
# academic session / registration windows
# ---------------------------------------------------------------------------


class AcademicSessionRepo(RepoBase):
    def set_current(self, year: int, semester: Semester) -> AcademicSession:
        with self.db.transaction():
            self.db.execute("UPDATE academic_sessions SET is_current = 0")
            self.db.execute(
                "INSERT INTO academic_sessions (year, current_semester, is_current)"
                " VALUES (?, ?, 1) ON CONFLICT (year) DO UPDATE SET"
                " current_semester = excluded.current_semester, is_current = 1",
                (year, semester.value),
            )
        return self.get_current()

    def get_current(self) -> AcademicSession:
        row = self.db.query_one(
            "SELECT * FROM academic_sessions WHERE is_current = 1"
        )
        if row is None:
            raise NotFound("no current academic session")
        windows = {
            r["department"]: bool(r["open"])
            for r in self.db.query_all("SELECT * FROM registration_windows")
        }
        return AcademicSession(
            year=row["year"], current_semester=Semester(row["current_semester"]),
            registration_open=windows,
        )

    def set_window(self, department: str, open_: bool) -> None:
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO registration_windows (department, open) VALUES (?, ?)"
                " ON CONFLICT (department) DO UPDATE SET open = excluded.open",
                (department, int(open_)),
            )

    def window_open(self, department: str) -> bool:
        row = self.db.query_one(
            "SELECT open FROM registration_windows WHERE department = ?", (department,)
        )
        return bool(row["open"]) if row else False
