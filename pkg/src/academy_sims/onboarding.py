"""Pin issuance and redemption, NPA roster upload, and self-registration.

Every registration path is one transaction: the pin CAS, the roster claim,
and the account row either all land or none do.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, replace

from .access_control import Action, Principal, ResourceScope, require
from .clock import Clock
from .domain import (
    Cadet,
    Designation,
    NpaRosterEntry,
    PinRole,
    RegistrationPin,
    Semester,
    Sex,
    Staff,
    parse_npa_number,
)
from .errors import (
    CountOutOfRange,
    HodSeatTaken,
    MalformedNpaNumber,
    PinAlreadyConsumed,
    PinNotFound,
    PinScopeMismatch,
    Unauthorized,
    ValidationFailed,
)
from .security import PasswordHasher
from .store import Store

PIN_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789"
PIN_LENGTH = 8
MAX_PINS_PER_BATCH = 500


def _new_pin_code() -> str:
    return "".join(secrets.choice(PIN_ALPHABET) for _ in range(PIN_LENGTH))


@dataclass(frozen=True)
class RejectedLine:
    line: str
    reason: str


@dataclass(frozen=True)
class RosterReport:
    accepted: list[str]
    rejected: list[RejectedLine]


class OnboardingService:
    def __init__(self, store: Store, hasher: PasswordHasher, clock: Clock,
                 max_roster_lines: int = 10_000):
        self.store = store
        self.hasher = hasher
        self.clock = clock
        self.max_roster_lines = max_roster_lines

    # -- pins -----------------------------------------------------------------

    def generate_pins(self, issuer: Principal, target_role: PinRole,
                      department: str, count: int) -> list[RegistrationPin]:
        action = Action.CREATE_STAFF_PIN if target_role == PinRole.STAFF else Action.CREATE_CADET_PIN
        require(issuer, action, ResourceScope(department=department))
        if not 1 <= count <= MAX_PINS_PER_BATCH:
            raise CountOutOfRange()
        self.store.departments.get(department)
        pins = []
        with self.store.transaction():
            for _ in range(count):
                pin = RegistrationPin(
                    pin_code=self._unique_code(),
                    target_role=target_role,
                    department=department,
                    created_by=issuer.ref,
                )
                pins.append(self.store.pins.insert(pin))
            self.store.audit.append(
                issuer.ref, "pins_created", f"{target_role.value}/{department}",
                {"count": count},
            )
        return pins

    def _unique_code(self) -> str:
        for _ in range(32):
            code = _new_pin_code()
            try:
                self.store.pins.get(code)
            except PinNotFound:
                return code
        raise ValidationFailed("could not generate a unique pin code")

    # -- roster ---------------------------------------------------------------

    def upload_npa_roster(self, issuer: Principal, department: str,
                          lines: list[str]) -> RosterReport:
        require(issuer, Action.UPLOAD_NPA_NUMBERS, ResourceScope(department=department))
        if len(lines) > self.max_roster_lines:
            raise ValidationFailed(
                f"roster upload limited to {self.max_roster_lines} lines"
            )
        accepted: list[str] = []
        rejected: list[RejectedLine] = []
        seen: set[str] = set()
        with self.store.transaction():
            for raw in lines:
                line = raw.strip()
                if not line:
                    continue
                try:
                    npa = parse_npa_number(line)
                except MalformedNpaNumber:
                    rejected.append(RejectedLine(line, "malformed"))
                    continue
                if npa in seen or self.store.roster.get(npa) is not None:
                    rejected.append(RejectedLine(line, "duplicate"))
                    continue
                self.store.roster.add(NpaRosterEntry(npa_number=npa, department=department))
                seen.add(npa)
                accepted.append(npa)
            self.store.audit.append(
                issuer.ref, "npa_roster_uploaded", department,
                {"accepted": len(accepted), "rejected": len(rejected)},
            )
        return RosterReport(accepted=accepted, rejected=rejected)

    # -- registration ---------------------------------------------------------

    def register_staff(self, pin_code: str, *, sur_name: str, first_name: str,
                       email: str, password: str) -> Staff:
        password_hash = self.hasher.hash(password)
        with self.store.transaction():
            pin = self.store.pins.get(pin_code)
            if pin.consumed:
                raise PinAlreadyConsumed()
            if pin.target_role != PinRole.STAFF:
                raise PinScopeMismatch()
            department = self.store.departments.get(pin.department)
            staff = self.store.staff.insert(Staff(
                sur_name=sur_name,
                first_name=first_name,
                faculty=department.faculty_name,
                department=department.name,
                pin=pin_code,
                email=email,
                password_hash=password_hash,
            ))
            self.store.pins.redeem_atomically(pin_code, staff.ref, PinRole.STAFF)
            self.store.audit.append(staff.ref, "staff_registered", staff.email,
                                    {"department": department.name})
        return staff

    def register_cadet(self, pin_code: str, npa_number: str, *,
                       sur_name: str, first_name: str, email: str, password: str,
                       rc: int, level: int, semester: Semester, squad: int,
                       sex: Sex, middle_name: str | None = None,
                       **optional_fields) -> Cadet:
        password_hash = self.hasher.hash(password)
        npa = parse_npa_number(npa_number)
        with self.store.transaction():
            pin = self.store.pins.get(pin_code)
            if pin.consumed:
                raise PinAlreadyConsumed()
            if pin.target_role != PinRole.CADET:
                raise PinScopeMismatch()
            department = self.store.departments.get(pin.department)
            cadet = self.store.cadets.insert(Cadet(
                sur_name=sur_name,
                first_name=first_name,
                middle_name=middle_name,
                npa_number=npa,
                pin=pin_code,
                email=email,
                rc=rc,
                faculty=department.faculty_name,
                department=department.name,
                level=level,
                semester=semester,
                squad=squad,
                sex=sex,
                password_hash=password_hash,
                **optional_fields,
            ))
            self.store.pins.redeem_atomically(pin_code, cadet.ref, PinRole.CADET)
            self.store.roster.claim_atomically(npa, department.name, cadet.id)
            self.store.audit.append(cadet.ref, "cadet_registered", npa,
                                    {"department": department.name})
        return cadet

    def complete_registration(self, issuer: Principal, designation: Designation,
                              cv: str | None = None, address: str | None = None,
                              dob: str | None = None) -> Staff:
        with self.store.transaction():
            staff = self.store.staff.get(issuer.id)
            if staff.designation is not None:
                raise Unauthorized()
            if designation == Designation.HOD:
                if self.store.staff.head_of(staff.department) is not None:
                    raise HodSeatTaken()
            updated = self.store.staff.update(replace(
                staff,
                designation=designation,
                cv=cv if cv is not None else staff.cv,
                address=address if address is not None else staff.address,
                dob=dob if dob is not None else staff.dob,
            ))
            self.store.audit.append(issuer.ref, "registration_completed",
                                    staff.email, {"designation": designation.value})
        return updated
