"""Seed data: one admin, one faculty, two departments, the current academic
session. Matches the demo content the portals are documented with."""

from __future__ import annotations

import secrets
from dataclasses import dataclass

from .domain import Admin, Department, Faculty, Semester
from .security import PasswordHasher
from .store import Store

SEED_FACULTY = "Science"
SEED_DEPARTMENTS = ("Sociology", "Computer Science")
SEED_ADMIN_EMAIL = "admin@academy.example"
SEED_ADMIN_NAME = "Portal Administrator"
SEED_SESSION_YEAR = 2019
SEED_SESSION_SEMESTER = Semester.FIRST


@dataclass(frozen=True)
class SeedResult:
    admin_email: str
    admin_password: str | None   # None when the admin already existed
    created: bool


def seed(store: Store, hasher: PasswordHasher,
         admin_password: str | None = None) -> SeedResult:
    """Idempotent: re-running against a seeded store changes nothing."""
    with store.transaction():
        existing = store.admins.get_by_email(SEED_ADMIN_EMAIL)
        if existing is not None:
            return SeedResult(SEED_ADMIN_EMAIL, None, created=False)
        password = admin_password or secrets.token_urlsafe(12)
        store.faculties.insert(Faculty(name=SEED_FACULTY))
        for name in SEED_DEPARTMENTS:
            store.departments.insert(Department(name=name, faculty_name=SEED_FACULTY))
        store.admins.insert(Admin(
            name=SEED_ADMIN_NAME,
            email=SEED_ADMIN_EMAIL,
            password_hash=hasher.hash(password),
        ))
        store.academic_sessions.set_current(SEED_SESSION_YEAR, SEED_SESSION_SEMESTER)
        store.audit.append(None, "store_seeded", SEED_ADMIN_EMAIL)
    return SeedResult(SEED_ADMIN_EMAIL, password, created=True)
