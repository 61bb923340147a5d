"""Core domain: entities, value types, and field-level validation.

Everything here is an immutable value object; no storage, no transport.
Mutation happens by constructing a replacement and writing it through the
store's transactional surface.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from .errors import (
    MalformedEmail,
    MalformedNpaNumber,
    OutOfRange,
    ValidationFailed,
)

# ---------------------------------------------------------------------------
# enums
# ---------------------------------------------------------------------------


class Role(str, Enum):
    """Effective permission role of an authenticated principal."""

    ADMIN = "admin"
    HOD = "hod"
    LECTURER = "lecturer"
    CADET = "cadet"


class Realm(str, Enum):
    """Which account store a principal lives in. Hod and Lecturer are staff
    designations, not separate stores."""

    ADMIN = "admin"
    STAFF = "staff"
    CADET = "cadet"


class Designation(str, Enum):
    HOD = "hod"
    LECTURER = "lecturer"


class Semester(str, Enum):
    FIRST = "first"
    SECOND = "second"


class PinRole(str, Enum):
    STAFF = "staff"
    CADET = "cadet"


class Sex(str, Enum):
    M = "M"
    F = "F"


class MediaKind(str, Enum):
    PDF = "pdf"
    DOC = "doc"
    DOCX = "docx"
    PPT = "ppt"
    PPTX = "pptx"


CADET_LEVELS = (100, 200, 300, 400, 500)

# ---------------------------------------------------------------------------
# value operations
# ---------------------------------------------------------------------------

_NPA_PATTERN = re.compile(r"^NPA/[0-9]{2}/[0-9]{2}/[0-9]{5}$")


def parse_npa_number(raw: str) -> str:
    """Normalize an NPA number to uppercase `NPA/DD/DD/DDDDD` form.

    Comparison is case-insensitive, so the uppercased form is canonical.
    """
    normalized = raw.strip().upper()
    if not _NPA_PATTERN.match(normalized):
        raise MalformedNpaNumber(f"not a valid NPA number: {raw.strip()!r}")
    return normalized


def is_valid_npa_number(raw: str) -> bool:
    try:
        parse_npa_number(raw)
        return True
    except MalformedNpaNumber:
        return False


GRADE_BOUNDARIES = ((70.0, "A"), (60.0, "B"), (50.0, "C"), (45.0, "D"), (40.0, "E"))


def grade_of(total: float) -> str:
    """Letter grade for a total in [0, 100]: A ≥ 70, B ≥ 60, C ≥ 50,
    D ≥ 45, E ≥ 40, F below."""
    if not 0 <= total <= 100:
        raise OutOfRange(f"score total must be within [0, 100], got {total}")
    for floor, letter in GRADE_BOUNDARIES:
        if total >= floor:
            return letter
    return "F"


_EMAIL_PATTERN = re.compile(r"^[^@\s]+@[^@\s.]+(\.[^@\s.]+)+$")


def validate_email(raw: str) -> str:
    """Lowercase and validate: exactly one @, non-empty local part, dotted
    domain with non-empty labels, no whitespace anywhere."""
    candidate = raw.strip().lower()
    if not _EMAIL_PATTERN.match(candidate) or candidate.count("@") != 1:
        raise MalformedEmail(f"not a valid email address: {raw.strip()!r}")
    return candidate


# ---------------------------------------------------------------------------
# principals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrincipalRef:
    realm: Realm
    id: int

    def __str__(self) -> str:
        return f"{self.realm.value}:{self.id}"


@dataclass(frozen=True)
class Admin:
    name: str
    email: str
    password_hash: str
    passport: str = "avatar.png"
    remember_token: str | None = None
    id: int | None = None
    created_at: datetime | None = None
    updated_at: datetime | None = None

    def __post_init__(self):
        object.__setattr__(self, "email", validate_email(self.email))
        if not self.password_hash:
            raise ValidationFailed("admin password hash must not be empty")

    @property
    def ref(self) -> PrincipalRef:
        return PrincipalRef(Realm.ADMIN, self.id)  # type: ignore[arg-type]


@dataclass(frozen=True)
class Staff:
    sur_name: str
    first_name: str
    faculty: str
    department: str
    pin: str
    email: str
    password_hash: str
    passport: str = "avatar.png"
    cv: str | None = None
    designation: Designation | None = None
    address: str | None = None
    dob: str | None = None
    remember_token: str | None = None
    id: int | None = None
    created_at: datetime | None = None
    updated_at: datetime | None = None

    def __post_init__(self):
        object.__setattr__(self, "email", validate_email(self.email))
        if not self.password_hash:
            raise ValidationFailed("staff password hash must not be empty")
        if self.designation is not None and not isinstance(self.designation, Designation):
            raise ValidationFailed("designation must be hod or lecturer")

    @property
    def ref(self) -> PrincipalRef:
        return PrincipalRef(Realm.STAFF, self.id)  # type: ignore[arg-type]

    @property
    def role(self) -> Role:
        # Incomplete staff act as lecturers: every lecturer course action is
        # vacuous for them since nothing can be assigned before completion.
        return Role.HOD if self.designation == Designation.HOD else Role.LECTURER


@dataclass(frozen=True)
class Cadet:
    sur_name: str
    first_name: str
    npa_number: str
    pin: str
    email: str
    rc: int
    faculty: str
    department: str
    level: int
    semester: Semester
    squad: int
    sex: Sex
    password_hash: str
    middle_name: str | None = None
    dob: str | None = None
    home_town: str | None = None
    local_govt: str | None = None
    state: str | None = None
    address: str | None = None
    next_of_kin_sur_name: str | None = None
    next_of_kin_first_name: str | None = None
    next_of_kin_relationship: str | None = None
    next_of_kin_address: str | None = None
    passport: str = "avatar.png"
    remember_token: str | None = None
    id: int | None = None
    created_at: datetime | None = None
    updated_at: datetime | None = None

    def __post_init__(self):
        object.__setattr__(self, "npa_number", parse_npa_number(self.npa_number))
        object.__setattr__(self, "email", validate_email(self.email))
        if self.level not in CADET_LEVELS:
            raise ValidationFailed(f"level must be one of {CADET_LEVELS}")
        if self.rc < 1:
            raise ValidationFailed("rc (cohort) must be a positive integer")
        if self.squad < 1:
            raise ValidationFailed("squad must be a positive integer")
        if not self.password_hash:
            raise ValidationFailed("cadet password hash must not be empty")

    @property
    def ref(self) -> PrincipalRef:
        return PrincipalRef(Realm.CADET, self.id)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# catalog and academic records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Faculty:
    name: str
    created_at: datetime | None = None
    updated_at: datetime | None = None
    deleted_at: datetime | None = None

    def __post_init__(self):
        if not self.name.strip():
            raise ValidationFailed("faculty name must not be empty")


@dataclass(frozen=True)
class Department:
    name: str
    faculty_name: str
    created_at: datetime | None = None
    updated_at: datetime | None = None
    deleted_at: datetime | None = None

    def __post_init__(self):
        if not self.name.strip():
            raise ValidationFailed("department name must not be empty")


@dataclass(frozen=True)
class Course:
    course_code: str
    course_title: str
    dept_name: str
    level: int
    unit: int
    semester: Semester
    year: int
    created_at: datetime | None = None
    updated_at: datetime | None = None
    deleted_at: datetime | None = None

    def __post_init__(self):
        if not self.course_code.strip():
            raise ValidationFailed("course code must not be empty")
        if self.unit < 1:
            raise ValidationFailed("course unit must be at least 1")
        if self.level not in CADET_LEVELS:
            raise ValidationFailed(f"course level must be one of {CADET_LEVELS}")


@dataclass(frozen=True)
class RegistrationPin:
    pin_code: str
    target_role: PinRole
    department: str
    created_by: PrincipalRef
    consumed: bool = False
    consumed_by: PrincipalRef | None = None
    created_at: datetime | None = None

    def __post_init__(self):
        if self.consumed and self.consumed_by is None:
            raise ValidationFailed("a consumed pin must record who consumed it")


@dataclass(frozen=True)
class NpaRosterEntry:
    npa_number: str
    department: str
    claimed: bool = False
    claimed_by: int | None = None
    created_at: datetime | None = None

    def __post_init__(self):
        object.__setattr__(self, "npa_number", parse_npa_number(self.npa_number))


@dataclass(frozen=True)
class CourseAssignment:
    course_code: str
    staff_id: int
    session_year: int
    id: int | None = None
    created_at: datetime | None = None
    updated_at: datetime | None = None


@dataclass(frozen=True)
class CourseRegistration:
    cadet_id: int
    course_code: str
    session_year: int
    semester: Semester
    id: int | None = None
    created_at: datetime | None = None


@dataclass(frozen=True)
class Score:
    cadet_id: int
    course_code: str
    session_year: int
    semester: Semester
    total: float
    grade: str
    uploaded_by: int
    id: int | None = None
    created_at: datetime | None = None
    updated_at: datetime | None = None

    def __post_init__(self):
        if not 0 <= self.total <= 100:
            raise ValidationFailed("score total must be within [0, 100]")
        if self.grade != grade_of(self.total):
            raise ValidationFailed("grade must be derived from the total")


@dataclass(frozen=True)
class Material:
    course_code: str
    original_filename: str
    stored_name: str
    size_bytes: int
    media_kind: MediaKind
    uploaded_by: int
    id: int | None = None
    created_at: datetime | None = None

    def __post_init__(self):
        if "/" in self.stored_name or "\\" in self.stored_name or ".." in self.stored_name:
            raise ValidationFailed("stored name must be an opaque flat filename")


@dataclass(frozen=True)
class Event:
    title: str
    body: str
    event_date: str
    created_by: int
    id: int | None = None
    created_at: datetime | None = None
    updated_at: datetime | None = None

    def __post_init__(self):
        if not self.title.strip():
            raise ValidationFailed("event title must not be empty")


@dataclass(frozen=True)
class AcademicSession:
    year: int
    current_semester: Semester
    registration_open: dict[str, bool] = field(default_factory=dict)
