"""Relational storage: migrations, repositories, transactions.

Normalization note (verified manually, table by table): every non-key column
is functionally dependent on its table's key and nothing else, and every
documented functional dependency has a superkey determinant, i.e. the schema
is in BCNF. The only non-trivial FDs are the declared keys themselves:
principals on their surrogate id (with email unique), faculties/departments/
courses on their natural names, pins on pin_code, roster on npa_number, and
the academic link tables on their declared composite uniques
(course_assignments and course_registrations and scores on
(course_code, session_year[, cadet_id])). Department -> faculty lives only
in departments; course attributes live only in courses; nothing is stored
redundantly across tables.
"""

from __future__ import annotations

from ..clock import Clock
from .base import Migration, StoreBase, from_iso, iso
from .repos import (
    AcademicSessionRepo,
    AdminRepo,
    AssignmentRepo,
    CadetRepo,
    CourseRepo,
    DepartmentRepo,
    EventRepo,
    FacultyRepo,
    MaterialRepo,
    PinRepo,
    RegistrationRepo,
    RosterRepo,
    ScoreRepo,
    StaffRepo,
)
from .state import (
    AuditRecord,
    AuditRepo,
    AuthSessionRepo,
    CsrfRepo,
    ResetTokenRepo,
    SessionRow,
    ThrottleRepo,
)

__all__ = ["Store", "Migration", "AuditRecord", "SessionRow", "iso", "from_iso"]


class Store(StoreBase):
    """The full repository surface over one SQLite file."""

    def __init__(self, path: str, clock: Clock | None = None):
        super().__init__(path, clock)
        self.admins = AdminRepo(self)
        self.staff = StaffRepo(self)
        self.cadets = CadetRepo(self)
        self.faculties = FacultyRepo(self)
        self.departments = DepartmentRepo(self)
        self.courses = CourseRepo(self)
        self.pins = PinRepo(self)
        self.roster = RosterRepo(self)
        self.assignments = AssignmentRepo(self)
        self.registrations = RegistrationRepo(self)
        self.scores = ScoreRepo(self)
        self.materials = MaterialRepo(self)
        self.events = EventRepo(self)
        self.academic_sessions = AcademicSessionRepo(self)
        self.auth_sessions = AuthSessionRepo(self)
        self.csrf_tokens = CsrfRepo(self)
        self.reset_tokens = ResetTokenRepo(self)
        self.throttle = ThrottleRepo(self)
        self.audit = AuditRepo(self)
