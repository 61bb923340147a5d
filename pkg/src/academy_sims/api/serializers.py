"""Entity -> JSON-dict serializers. Credential material (password hashes,
remember tokens) never leaves the service."""

from __future__ import annotations

from ..access_control import Principal
from ..domain import (
    Admin,
    Cadet,
    Course,
    CourseAssignment,
    CourseRegistration,
    Event,
    Material,
    RegistrationPin,
    Staff,
)
from ..store import Migration


def _iso(dt) -> str | None:
    return dt.isoformat() if dt else None


def admin_json(a: Admin) -> dict:
    return {
        "id": a.id,
        "name": a.name,
        "email": a.email,
        "passport": a.passport,
        "createdAt": _iso(a.created_at),
        "updatedAt": _iso(a.updated_at),
    }


def staff_json(s: Staff) -> dict:
    return {
        "id": s.id,
        "surName": s.sur_name,
        "firstName": s.first_name,
        "faculty": s.faculty,
        "department": s.department,
        "pin": s.pin,
        "passport": s.passport,
        "cv": s.cv,
        "designation": s.designation.value if s.designation else None,
        "address": s.address,
        "email": s.email,
        "dob": s.dob,
        "registrationComplete": s.designation is not None,
        "createdAt": _iso(s.created_at),
        "updatedAt": _iso(s.updated_at),
    }


def cadet_json(c: Cadet) -> dict:
    return {
        "id": c.id,
        "surName": c.sur_name,
        "firstName": c.first_name,
        "middleName": c.middle_name,
        "npaNumber": c.npa_number,
        "pin": c.pin,
        "email": c.email,
        "rc": c.rc,
        "faculty": c.faculty,
        "department": c.department,
        "level": c.level,
        "semester": c.semester.value,
        "squad": c.squad,
        "sex": c.sex.value,
        "dob": c.dob,
        "homeTown": c.home_town,
        "localGovt": c.local_govt,
        "state": c.state,
        "address": c.address,
        "nextOfKinSurName": c.next_of_kin_sur_name,
        "nextOfKinFirstName": c.next_of_kin_first_name,
        "nextOfKinRelationship": c.next_of_kin_relationship,
        "nextOfKinAddress": c.next_of_kin_address,
        "passport": c.passport,
        "createdAt": _iso(c.created_at),
        "updatedAt": _iso(c.updated_at),
    }


def course_json(c: Course) -> dict:
    return {
        "courseCode": c.course_code,
        "courseTitle": c.course_title,
        "deptName": c.dept_name,
        "level": c.level,
        "unit": c.unit,
        "semester": c.semester.value,
        "year": c.year,
        "createdAt": _iso(c.created_at),
        "updatedAt": _iso(c.updated_at),
        "deletedAt": _iso(c.deleted_at),
    }


def pin_json(p: RegistrationPin) -> dict:
    return {
        "pinCode": p.pin_code,
        "targetRole": p.target_role.value,
        "department": p.department,
        "consumed": p.consumed,
        "consumedBy": str(p.consumed_by) if p.consumed_by else None,
        "createdBy": str(p.created_by),
        "createdAt": _iso(p.created_at),
    }


def assignment_json(a: CourseAssignment) -> dict:
    return {
        "courseCode": a.course_code,
        "staffId": a.staff_id,
        "sessionYear": a.session_year,
        "createdAt": _iso(a.created_at),
        "updatedAt": _iso(a.updated_at),
    }


def registration_json(r: CourseRegistration) -> dict:
    return {
        "cadetId": r.cadet_id,
        "courseCode": r.course_code,
        "sessionYear": r.session_year,
        "semester": r.semester.value,
        "createdAt": _iso(r.created_at),
    }


def material_json(m: Material) -> dict:
    return {
        "id": m.id,
        "courseCode": m.course_code,
        "originalFilename": m.original_filename,
        "sizeBytes": m.size_bytes,
        "mediaKind": m.media_kind.value,
        "uploadedBy": m.uploaded_by,
        "createdAt": _iso(m.created_at),
    }


def event_json(e: Event) -> dict:
    return {
        "id": e.id,
        "title": e.title,
        "body": e.body,
        "eventDate": e.event_date,
        "createdBy": e.created_by,
        "createdAt": _iso(e.created_at),
    }


def migration_json(m: Migration) -> dict:
    return {"ordinal": m.ordinal, "description": m.description,
            "appliedAt": _iso(m.applied_at)}


def principal_json(p: Principal) -> dict:
    return {
        "realm": p.realm.value,
        "role": p.role.value,
        "id": p.id,
        "name": p.name,
        "email": p.email,
        "department": p.department,
    }
