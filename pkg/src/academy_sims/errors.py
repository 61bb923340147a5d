"""Exception hierarchy shared by every layer.

Each error carries a stable machine code and the HTTP status the API tier
maps it to. Messages are safe to return to clients verbatim: they never
embed query text, file paths, or stack traces.
"""

from __future__ import annotations


class ServiceError(Exception):
    machine_code = "service_error"
    http_status = 500
    default_message = "service error"

    def __init__(self, message: str | None = None):
        super().__init__(message or self.default_message)

    @property
    def message(self) -> str:
        return str(self)


# -- validation / domain -----------------------------------------------------

class ValidationFailed(ServiceError):
    machine_code = "validation_error"
    http_status = 422
    default_message = "validation failed"


class MalformedNpaNumber(ValidationFailed):
    machine_code = "malformed_npa_number"
    default_message = "not a valid NPA number"


class MalformedEmail(ValidationFailed):
    machine_code = "malformed_email"
    default_message = "not a valid email address"


class OutOfRange(ValidationFailed):
    machine_code = "out_of_range"
    default_message = "value out of range"


class WeakPassword(ValidationFailed):
    machine_code = "weak_password"
    default_message = "password must be at least 8 characters"


class CountOutOfRange(ValidationFailed):
    machine_code = "count_out_of_range"
    default_message = "count must be between 1 and 500"


class ScoreOutOfRange(ValidationFailed):
    machine_code = "score_out_of_range"
    default_message = "score total must be between 0 and 100"


class FileTooLarge(ValidationFailed):
    machine_code = "file_too_large"
    default_message = "file exceeds the configured size limit"


class DisallowedType(ValidationFailed):
    machine_code = "disallowed_type"
    default_message = "file type not allowed"


class IneligibleCourse(ValidationFailed):
    machine_code = "ineligible_course"
    default_message = "course not eligible for this cadet"


class NpaNotOnRoster(ValidationFailed):
    machine_code = "npa_not_on_roster"
    default_message = "NPA number is not on the department roster"


class CrossDepartment(ValidationFailed):
    machine_code = "cross_department"
    default_message = "staff member belongs to a different department"


class InvalidResetToken(ValidationFailed):
    machine_code = "invalid_reset_token"
    default_message = "reset token is unknown, expired, or already used"


# -- persistence -------------------------------------------------------------

class DuplicateKey(ServiceError):
    machine_code = "duplicate_key"
    http_status = 409
    default_message = "a record with this key already exists"


class ForeignKeyViolation(ValidationFailed):
    machine_code = "foreign_key_violation"
    default_message = "referenced record does not exist"


class NotFound(ServiceError):
    machine_code = "not_found"
    http_status = 404
    default_message = "record not found"


class StorageUnavailable(ServiceError):
    machine_code = "storage_unavailable"
    http_status = 500
    default_message = "storage is unavailable"


class NotMigrated(ServiceError):
    machine_code = "not_migrated"
    http_status = 500
    default_message = "storage schema is not up to date"


# -- onboarding --------------------------------------------------------------

class PinNotFound(ServiceError):
    machine_code = "pin_not_found"
    http_status = 404
    default_message = "registration pin not found"


class PinAlreadyConsumed(ServiceError):
    machine_code = "pin_already_consumed"
    http_status = 409
    default_message = "registration pin has already been used"


class PinScopeMismatch(ServiceError):
    machine_code = "pin_scope_mismatch"
    http_status = 409
    default_message = "registration pin is for a different role or department"


class NpaAlreadyClaimed(ServiceError):
    machine_code = "npa_already_claimed"
    http_status = 409
    default_message = "NPA number has already been claimed"


class HodSeatTaken(ServiceError):
    machine_code = "hod_seat_taken"
    http_status = 409
    default_message = "this department already has a head"


class RegistrationClosed(ServiceError):
    machine_code = "registration_closed"
    http_status = 409
    default_message = "course registration is not open for this department"


# -- auth / security ---------------------------------------------------------

class Unauthorized(ServiceError):
    # Deliberately detail-free: denial never explains itself.
    machine_code = "unauthorized"
    http_status = 403
    default_message = "forbidden"


class InvalidSession(ServiceError):
    machine_code = "invalid_session"
    http_status = 401
    default_message = "not authenticated"


class InvalidCredentials(ServiceError):
    # One error for wrong email and wrong password: no enumeration oracle.
    machine_code = "invalid_credentials"
    http_status = 401
    default_message = "invalid credentials"


class CsrfMismatch(ServiceError):
    machine_code = "csrf_mismatch"
    http_status = 403
    default_message = "missing or invalid CSRF token"


class LockedOut(ServiceError):
    machine_code = "throttled"
    http_status = 429
    default_message = "too many failures, try again later"


class MalformedHash(ServiceError):
    machine_code = "malformed_hash"
    http_status = 500
    default_message = "stored password hash is malformed"


class IntegrityFailure(ServiceError):
    # Tampered ciphertext and wrong key are indistinguishable by design.
    machine_code = "integrity_failure"
    http_status = 500
    default_message = "sealed data failed integrity verification"


class PayloadTooLarge(ServiceError):
    machine_code = "payload_too_large"
    http_status = 413
    default_message = "request body too large"


class BindFailure(ServiceError):
    machine_code = "bind_failure"
    default_message = "could not bind to the configured address"


# -- audit CLI ---------------------------------------------------------------

class TargetUnreachable(ServiceError):
    machine_code = "target_unreachable"
    default_message = "audit target is unreachable"


class FixtureInvalid(ServiceError):
    machine_code = "fixture_invalid"
    default_message = "audit credentials fixture is invalid"
