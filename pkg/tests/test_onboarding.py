import re
import threading
from concurrent.futures import ThreadPoolExecutor

import pytest

from academy_sims.clock import ManualClock
from academy_sims.config import FAST_TEST_HASH
from academy_sims.domain import Admin, Designation, PinRole, Semester, Sex
from academy_sims.errors import (
    CountOutOfRange,
    DuplicateKey,
    HodSeatTaken,
    NpaNotOnRoster,
    PinAlreadyConsumed,
    ServiceError,
    Unauthorized,
)
from academy_sims.onboarding import OnboardingService
from academy_sims.security import PasswordHasher
from academy_sims.store import Store

from conftest import DEPT_A, DEPT_B, principal_of, seed_catalog

PIN_SHAPE = re.compile(r"^[a-z0-9]{8}$")


@pytest.fixture
def env(seeded_store, fast_hasher, clock):
    service = OnboardingService(seeded_store, fast_hasher, clock)
    admin = seeded_store.admins.insert(Admin(
        name="Portal Administrator", email="admin@academy.example",
        password_hash=fast_hasher.hash("adminpass1"),
    ))
    return seeded_store, service, principal_of(admin)


def make_hod(store, service, admin_principal, department=DEPT_A,
             email="hod@academy.example"):
    pin = service.generate_pins(admin_principal, PinRole.STAFF, department, 1)[0]
    staff = service.register_staff(pin.pin_code, sur_name="Philemon",
                                   first_name="Edward", email=email,
                                   password="hodpass99")
    return service.complete_registration(principal_of(staff), Designation.HOD)


def register_demo_cadet(store, service, hod_principal, npa="NPA/04/09/00187",
                        email="cadet@academy.example", department=DEPT_A):
    pin = service.generate_pins(hod_principal, PinRole.CADET, department, 1)[0]
    service.upload_npa_roster(hod_principal, department, [npa])
    return service.register_cadet(
        pin.pin_code, npa, sur_name="Ayanlade", first_name="Olushola",
        email=email, password="cadetpass1", rc=6, level=100,
        semester=Semester.FIRST, squad=2, sex=Sex.M,
    )


# ---------------------------------------------------------------------------
# pin generation
# ---------------------------------------------------------------------------


def test_admin_generates_staff_pin_with_expected_shape(env):
    store, service, admin = env
    pins = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 1)
    assert len(pins) == 1
    assert PIN_SHAPE.match(pins[0].pin_code)
    assert pins[0].consumed is False
    assert pins[0].department == DEPT_A


def test_hod_generates_cadet_pin_for_own_department(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    pins = service.generate_pins(principal_of(hod), PinRole.CADET, DEPT_A, 1)
    assert PIN_SHAPE.match(pins[0].pin_code)
    with pytest.raises(Unauthorized):
        service.generate_pins(principal_of(hod), PinRole.CADET, DEPT_B, 1)


def test_lecturer_cannot_generate_pins(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    staff_pin = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 1)[0]
    lecturer = service.register_staff(
        staff_pin.pin_code, sur_name="L", first_name="L",
        email="lect@academy.example", password="lectpass99",
    )
    lecturer = service.complete_registration(principal_of(lecturer), Designation.LECTURER)
    with pytest.raises(Unauthorized):
        service.generate_pins(principal_of(lecturer), PinRole.CADET, DEPT_A, 1)


def test_admin_cannot_generate_cadet_pins(env):
    store, service, admin = env
    with pytest.raises(Unauthorized):
        service.generate_pins(admin, PinRole.CADET, DEPT_A, 1)


def test_generate_500_distinct_codes(env):
    store, service, admin = env
    pins = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 500)
    codes = {p.pin_code for p in pins}
    assert len(codes) == 500
    assert all(PIN_SHAPE.match(c) for c in codes)


@pytest.mark.parametrize("count", [0, 501, -3])
def test_count_out_of_range(env, count):
    store, service, admin = env
    with pytest.raises(CountOutOfRange):
        service.generate_pins(admin, PinRole.STAFF, DEPT_A, count)


# ---------------------------------------------------------------------------
# roster upload
# ---------------------------------------------------------------------------


def test_roster_accepts_valid_number(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    report = service.upload_npa_roster(principal_of(hod), DEPT_A, ["NPA/03/02/00404"])
    assert report.accepted == ["NPA/03/02/00404"]
    assert report.rejected == []


def test_roster_rejects_duplicate_on_reupload(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    service.upload_npa_roster(principal_of(hod), DEPT_A, ["NPA/03/02/00404"])
    report = service.upload_npa_roster(principal_of(hod), DEPT_A, ["NPA/03/02/00404"])
    assert report.accepted == []
    assert [r.reason for r in report.rejected] == ["duplicate"]


def test_roster_mixed_batch_counts_match_independent_regex_pass(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    lines = [
        "NPA/01/01/00001", "garbage", "NPA/1/01/00002", "npa/02/02/00002",
        "", "NPA/03/03/00003", "NPA/03/03/00003",
    ]
    # independent oracle: a fresh regex pass over the same lines
    pattern = re.compile(r"^NPA/\d{2}/\d{2}/\d{5}$")
    seen = set()
    expected_valid = 0
    expected_rejected = 0
    for line in (l.strip() for l in lines if l.strip()):
        canonical = line.upper()
        if pattern.match(canonical) and canonical not in seen:
            expected_valid += 1
            seen.add(canonical)
        else:
            expected_rejected += 1
    report = service.upload_npa_roster(principal_of(hod), DEPT_A, lines)
    assert len(report.accepted) == expected_valid == 3
    assert len(report.rejected) == expected_rejected == 3
    assert len(store.roster.list(DEPT_A)) == 3


# ---------------------------------------------------------------------------
# staff registration
# ---------------------------------------------------------------------------


def test_staff_registration_happy_path(env):
    store, service, admin = env
    pin = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 1)[0]
    staff = service.register_staff(pin.pin_code, sur_name="P", first_name="E",
                                   email="s@academy.example", password="staffpass1")
    assert staff.department == DEPT_A
    assert staff.faculty == "Science"
    assert staff.designation is None
    assert store.pins.get(pin.pin_code).consumed is True
    assert store.pins.get(pin.pin_code).consumed_by == staff.ref


def test_consumed_pin_creates_no_account(env):
    store, service, admin = env
    pin = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 1)[0]
    service.register_staff(pin.pin_code, sur_name="A", first_name="A",
                           email="a@academy.example", password="staffpass1")
    with pytest.raises(PinAlreadyConsumed):
        service.register_staff(pin.pin_code, sur_name="B", first_name="B",
                               email="b@academy.example", password="staffpass1")
    assert len(store.staff.list()) == 1


def test_duplicate_email_rolls_back_pin(env):
    store, service, admin = env
    pin1, pin2 = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 2)
    service.register_staff(pin1.pin_code, sur_name="A", first_name="A",
                           email="same@academy.example", password="staffpass1")
    with pytest.raises(DuplicateKey):
        service.register_staff(pin2.pin_code, sur_name="B", first_name="B",
                               email="same@academy.example", password="staffpass1")
    assert store.pins.get(pin2.pin_code).consumed is False
    assert len(store.staff.list()) == 1


# ---------------------------------------------------------------------------
# cadet registration
# ---------------------------------------------------------------------------


def test_cadet_registration_happy_path(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    cadet = register_demo_cadet(store, service, principal_of(hod))
    assert cadet.npa_number == "NPA/04/09/00187"
    assert cadet.department == DEPT_A
    entry = store.roster.get("NPA/04/09/00187")
    assert entry.claimed is True and entry.claimed_by == cadet.id


def test_unrostered_npa_leaves_pin_unconsumed(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    pin = service.generate_pins(principal_of(hod), PinRole.CADET, DEPT_A, 1)[0]
    with pytest.raises(NpaNotOnRoster):
        service.register_cadet(
            pin.pin_code, "NPA/09/09/09999", sur_name="X", first_name="X",
            email="x@academy.example", password="cadetpass1", rc=1, level=100,
            semester=Semester.FIRST, squad=1, sex=Sex.F,
        )
    assert store.pins.get(pin.pin_code).consumed is False
    assert store.cadets.list() == []


def test_concurrent_registrations_share_one_npa(tmp_path):
    store = Store(str(tmp_path / "race.db"), ManualClock())
    store.migrate()
    seed_catalog(store)
    hasher = PasswordHasher(FAST_TEST_HASH)
    service = OnboardingService(store, hasher, store.clock)
    admin = store.admins.insert(Admin(name="A", email="admin@academy.example",
                                      password_hash=hasher.hash("adminpass1")))
    hod = make_hod(store, service, principal_of(admin))
    hod_principal = principal_of(hod)
    pins = service.generate_pins(hod_principal, PinRole.CADET, DEPT_A, 8)
    service.upload_npa_roster(hod_principal, DEPT_A, ["NPA/04/09/00187"])
    barrier = threading.Barrier(8)

    def attempt(i):
        barrier.wait()
        try:
            service.register_cadet(
                pins[i].pin_code, "NPA/04/09/00187", sur_name=f"S{i}",
                first_name="F", email=f"c{i}@academy.example",
                password="cadetpass1", rc=1, level=100,
                semester=Semester.FIRST, squad=1, sex=Sex.M,
            )
            return "won"
        except ServiceError:
            return "lost"

    with ThreadPoolExecutor(max_workers=8) as pool:
        outcomes = list(pool.map(attempt, range(8)))
    assert outcomes.count("won") == 1
    assert len(store.cadets.list()) == 1
    # losers' pins must have been rolled back
    consumed = [p for p in store.pins.list(target_role=PinRole.CADET) if p.consumed]
    assert len(consumed) == 1
    store.close()


# ---------------------------------------------------------------------------
# completion
# ---------------------------------------------------------------------------


def test_first_hod_request_granted_second_denied(env):
    store, service, admin = env
    make_hod(store, service, admin)
    pin = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 1)[0]
    second = service.register_staff(pin.pin_code, sur_name="B", first_name="B",
                                    email="b@academy.example", password="staffpass1")
    with pytest.raises(HodSeatTaken):
        service.complete_registration(principal_of(second), Designation.HOD)


def test_lecturer_designation_always_granted(env):
    store, service, admin = env
    make_hod(store, service, admin)
    for i in range(3):
        pin = service.generate_pins(admin, PinRole.STAFF, DEPT_A, 1)[0]
        staff = service.register_staff(
            pin.pin_code, sur_name=f"S{i}", first_name="F",
            email=f"l{i}@academy.example", password="staffpass1",
        )
        updated = service.complete_registration(principal_of(staff), Designation.LECTURER)
        assert updated.designation == Designation.LECTURER


def test_completion_rejected_when_designation_already_set(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    with pytest.raises(Unauthorized):
        service.complete_registration(principal_of(hod), Designation.LECTURER)


# ---------------------------------------------------------------------------
# conservation invariants
# ---------------------------------------------------------------------------


def test_pin_conservation_after_mixed_workload(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    hod_principal = principal_of(hod)
    service.generate_pins(admin, PinRole.STAFF, DEPT_A, 3)           # unconsumed
    register_demo_cadet(store, service, hod_principal)
    service.upload_npa_roster(hod_principal, DEPT_A, ["NPA/05/05/00005"])
    pin = service.generate_pins(hod_principal, PinRole.CADET, DEPT_A, 1)[0]
    service.register_cadet(
        pin.pin_code, "NPA/05/05/00005", sur_name="Y", first_name="Y",
        email="y@academy.example", password="cadetpass1", rc=2, level=200,
        semester=Semester.FIRST, squad=3, sex=Sex.F,
    )
    for department in (DEPT_A, DEPT_B):
        consumed_staff = store.pins.count_consumed(PinRole.STAFF, department)
        consumed_cadet = store.pins.count_consumed(PinRole.CADET, department)
        assert consumed_staff == len(store.staff.list(department=department))
        assert consumed_cadet == len(store.cadets.list(department=department))


def test_every_account_is_backed_by_a_consumed_pin(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    register_demo_cadet(store, service, principal_of(hod))
    for staff in store.staff.list():
        pin = store.pins.get(staff.pin)
        assert pin.consumed and pin.consumed_by == staff.ref
    for cadet in store.cadets.list():
        pin = store.pins.get(cadet.pin)
        assert pin.consumed and pin.consumed_by == cadet.ref


def test_roster_claims_are_injective(env):
    store, service, admin = env
    hod = make_hod(store, service, admin)
    register_demo_cadet(store, service, principal_of(hod))
    claimed = [e for e in store.roster.list() if e.claimed]
    claimants = [e.claimed_by for e in claimed]
    assert len(claimants) == len(set(claimants))
    for entry in claimed:
        assert store.cadets.get(entry.claimed_by).npa_number == entry.npa_number
