import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import pytest

from academy_sims.clock import ManualClock
from academy_sims.domain import (
    Admin,
    Cadet,
    Course,
    Department,
    Faculty,
    PinRole,
    PrincipalRef,
    Realm,
    RegistrationPin,
    Semester,
    Sex,
    Staff,
)
from academy_sims.errors import (
    DuplicateKey,
    ForeignKeyViolation,
    NotFound,
    PinAlreadyConsumed,
    PinNotFound,
    PinScopeMismatch,
)
from academy_sims.store import Store
from academy_sims.store.base import _split_statements, load_migrations

from conftest import DEPT_A, DEPT_B, seed_catalog

HASH = "$argon2id$stub"


def _staff(email="lect@academy.example", department=DEPT_A, **overrides):
    fields = dict(
        sur_name="Philemon", first_name="Edward", faculty="Science",
        department=department, pin="abcd1234", email=email, password_hash=HASH,
    )
    fields.update(overrides)
    return Staff(**fields)


def _cadet(email="c1@academy.example", npa="NPA/04/09/00187", department=DEPT_A,
           **overrides):
    fields = dict(
        sur_name="Ayanlade", first_name="Olushola", npa_number=npa,
        pin="k3rlk4zk", email=email, rc=6, faculty="Science",
        department=department, level=100, semester=Semester.FIRST, squad=2,
        sex=Sex.M, password_hash=HASH,
    )
    fields.update(overrides)
    return Cadet(**fields)


# ---------------------------------------------------------------------------
# migrations
# ---------------------------------------------------------------------------


def test_fresh_store_applies_all_migrations(tmp_path, clock):
    store = Store(str(tmp_path / "m.db"), clock)
    applied = store.migrate()
    assert len(applied) >= 1
    assert [m.ordinal for m in applied] == sorted(m.ordinal for m in applied)
    store.close()


def test_second_migrate_is_noop(store):
    assert store.migrate() == []


@pytest.mark.parametrize("k", range(len(load_migrations()) + 1))
def test_store_at_version_k_applies_only_newer(tmp_path, k):
    clock = ManualClock()
    store = Store(str(tmp_path / f"k{k}.db"), clock)
    all_migrations = load_migrations()
    # hand-apply the first k files, mimicking an older deployment
    store._ensure_migrations_table()
    for ordinal, description, sql in all_migrations[:k]:
        with store.transaction() as conn:
            for statement in _split_statements(sql):
                conn.execute(statement)
            conn.execute(
                "INSERT INTO schema_migrations (ordinal, description, applied_at)"
                " VALUES (?, ?, ?)",
                (ordinal, description, store.now_iso()),
            )
    newly = store.migrate()
    assert [m.ordinal for m in newly] == [m[0] for m in all_migrations[k:]]
    assert store.migrate() == []
    store.close()


# ---------------------------------------------------------------------------
# round trips and key constraints
# ---------------------------------------------------------------------------


def test_admin_round_trip(store):
    inserted = store.admins.insert(Admin(
        name="Portal Administrator", email="admin@academy.example",
        password_hash=HASH,
    ))
    fetched = store.admins.get(inserted.id)
    assert fetched == inserted
    assert fetched.created_at is not None


def test_staff_round_trip_and_duplicate_email(seeded_store):
    store = seeded_store
    first = store.staff.insert(_staff())
    assert store.staff.get(first.id) == first
    with pytest.raises(DuplicateKey):
        store.staff.insert(_staff())


def test_cadet_round_trip_and_unique_npa(seeded_store):
    store = seeded_store
    first = store.cadets.insert(_cadet())
    assert store.cadets.get(first.id) == first
    with pytest.raises(DuplicateKey):
        store.cadets.insert(_cadet(email="other@academy.example"))
    with pytest.raises(DuplicateKey):
        store.cadets.insert(_cadet(npa="NPA/04/09/00188"))


def test_cadet_with_unknown_department_is_rejected(seeded_store):
    with pytest.raises(ForeignKeyViolation):
        seeded_store.cadets.insert(_cadet(department="NoSuchDept"))


def test_required_indexes_exist(store):
    names = {
        row["name"]
        for row in store.query_all(
            "SELECT name FROM sqlite_master WHERE type = 'index'"
        )
    }
    for required in ("admins_email_unique", "staff_email_unique",
                     "staff_department_index", "courses_dept_name_index",
                     "cadets_npa_number_unique", "cadets_email_unique"):
        assert required in names


def test_update_round_trip(seeded_store):
    store = seeded_store
    staff = store.staff.insert(_staff())
    updated = store.staff.update(replace(staff, address="12 Barracks Road"))
    assert store.staff.get(staff.id).address == "12 Barracks Road"
    assert updated.updated_at is not None


def test_get_missing_raises_not_found(store):
    with pytest.raises(NotFound):
        store.admins.get(999)


# ---------------------------------------------------------------------------
# soft delete
# ---------------------------------------------------------------------------


def _course(code="SOC-103", department=DEPT_A, **overrides):
    fields = dict(
        course_code=code, course_title="INTRODUCTION TO SOCIOLOGY",
        dept_name=department, level=100, unit=2, semester=Semester.FIRST,
        year=2019,
    )
    fields.update(overrides)
    return Course(**fields)


def test_soft_delete_hides_course_but_keeps_row(seeded_store):
    store = seeded_store
    store.courses.insert(_course())
    store.courses.soft_delete("SOC-103")
    assert all(c.course_code != "SOC-103" for c in store.courses.list())
    raw = store.query_one(
        "SELECT deleted_at FROM courses WHERE course_code = ?", ("SOC-103",)
    )
    assert raw["deleted_at"] is not None
    with pytest.raises(NotFound):
        store.courses.get("SOC-103")
    assert store.courses.get_any("SOC-103").deleted_at is not None


def test_deleted_course_code_can_be_recreated(seeded_store):
    store = seeded_store
    store.courses.insert(_course())
    store.courses.soft_delete("SOC-103")
    revived = store.courses.insert(_course(course_title="NEW TITLE"))
    assert revived.deleted_at is None
    assert store.courses.get("SOC-103").course_title == "NEW TITLE"


def test_live_duplicate_course_rejected(seeded_store):
    seeded_store.courses.insert(_course())
    with pytest.raises(DuplicateKey):
        seeded_store.courses.insert(_course())


def test_faculty_soft_delete_and_revival(store):
    store.faculties.insert(Faculty(name="Science"))
    with pytest.raises(DuplicateKey):
        store.faculties.insert(Faculty(name="Science"))
    store.faculties.soft_delete("Science")
    assert store.faculties.list() == []
    revived = store.faculties.insert(Faculty(name="Science"))
    assert revived.deleted_at is None


def test_department_requires_live_faculty(store):
    store.faculties.insert(Faculty(name="Science"))
    store.faculties.soft_delete("Science")
    with pytest.raises(NotFound):
        store.departments.insert(Department(name="X", faculty_name="Science"))


# ---------------------------------------------------------------------------
# transactions
# ---------------------------------------------------------------------------


def test_failed_work_leaves_no_rows(seeded_store):
    store = seeded_store
    with pytest.raises(RuntimeError):
        with store.transaction():
            store.staff.insert(_staff(email="a@academy.example"))
            store.staff.insert(_staff(email="b@academy.example"))
            raise RuntimeError("boom")
    assert store.staff.list() == []


def test_successful_work_commits_both_rows(seeded_store):
    store = seeded_store
    with store.transaction():
        store.staff.insert(_staff(email="a@academy.example"))
        store.staff.insert(_staff(email="b@academy.example"))
    assert len(store.staff.list()) == 2


def test_nested_registration_rolls_back_completely(seeded_store):
    store = seeded_store
    cadet = store.cadets.insert(_cadet())
    for code in ("SOC-101", "SOC-102", "SOC-103"):
        store.courses.insert(_course(code=code))
    from academy_sims.domain import CourseRegistration

    snapshot = store.query_all("SELECT * FROM course_registrations")
    with pytest.raises(ForeignKeyViolation):
        with store.transaction():
            for code in ("SOC-101", "SOC-102", "NO-SUCH"):
                store.registrations.add_if_absent(CourseRegistration(
                    cadet_id=cadet.id, course_code=code, session_year=2019,
                    semester=Semester.FIRST,
                ))
    after = store.query_all("SELECT * FROM course_registrations")
    assert [tuple(r) for r in after] == [tuple(r) for r in snapshot] == []


# ---------------------------------------------------------------------------
# pin redemption CAS
# ---------------------------------------------------------------------------


def _pin(store, code="k3rlk4zk", role=PinRole.CADET, department=DEPT_A):
    issuer = PrincipalRef(Realm.ADMIN, 1)
    return store.pins.insert(RegistrationPin(
        pin_code=code, target_role=role, department=department, created_by=issuer,
    ))


def test_redeem_valid_pin(seeded_store):
    store = seeded_store
    _pin(store)
    claimant = PrincipalRef(Realm.CADET, 7)
    redeemed = store.pins.redeem_atomically("k3rlk4zk", claimant, PinRole.CADET, DEPT_A)
    assert redeemed.consumed is True
    assert redeemed.consumed_by == claimant


def test_redeem_same_pin_twice(seeded_store):
    store = seeded_store
    _pin(store)
    store.pins.redeem_atomically("k3rlk4zk", PrincipalRef(Realm.CADET, 7), PinRole.CADET)
    with pytest.raises(PinAlreadyConsumed):
        store.pins.redeem_atomically("k3rlk4zk", PrincipalRef(Realm.CADET, 8), PinRole.CADET)


def test_redeem_unknown_pin(seeded_store):
    with pytest.raises(PinNotFound):
        seeded_store.pins.redeem_atomically(
            "nope0000", PrincipalRef(Realm.CADET, 7), PinRole.CADET
        )


def test_redeem_scope_mismatch(seeded_store):
    store = seeded_store
    _pin(store, role=PinRole.STAFF)
    with pytest.raises(PinScopeMismatch):
        store.pins.redeem_atomically("k3rlk4zk", PrincipalRef(Realm.CADET, 7), PinRole.CADET)
    with pytest.raises(PinScopeMismatch):
        store.pins.redeem_atomically(
            "k3rlk4zk", PrincipalRef(Realm.STAFF, 7), PinRole.STAFF, DEPT_B
        )
    # the failed attempts must not have consumed it
    assert store.pins.get("k3rlk4zk").consumed is False


def test_exactly_one_current_academic_session(seeded_store):
    store = seeded_store
    store.academic_sessions.set_current(2020, Semester.SECOND)
    current = store.academic_sessions.get_current()
    assert current.year == 2020
    assert current.current_semester == Semester.SECOND
    rows = store.query_all(
        "SELECT * FROM academic_sessions WHERE is_current = 1"
    )
    assert len(rows) == 1


def test_registration_window_state_round_trip(seeded_store):
    store = seeded_store
    assert store.academic_sessions.window_open(DEPT_A) is False
    store.academic_sessions.set_window(DEPT_A, True)
    assert store.academic_sessions.window_open(DEPT_A) is True
    assert store.academic_sessions.window_open(DEPT_B) is False
    assert store.academic_sessions.get_current().registration_open == {DEPT_A: True}


def test_concurrent_redemption_has_exactly_one_winner(tmp_path):
    store = Store(str(tmp_path / "race.db"), ManualClock())
    store.migrate()
    seed_catalog(store)
    _pin(store)
    barrier = threading.Barrier(32)

    def claim(i):
        barrier.wait()
        try:
            store.pins.redeem_atomically(
                "k3rlk4zk", PrincipalRef(Realm.CADET, i), PinRole.CADET
            )
            return "won"
        except PinAlreadyConsumed:
            return "lost"

    with ThreadPoolExecutor(max_workers=32) as pool:
        outcomes = list(pool.map(claim, range(32)))
    assert outcomes.count("won") == 1
    assert outcomes.count("lost") == 31
    store.close()
