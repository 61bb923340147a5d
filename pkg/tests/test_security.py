import secrets

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from academy_sims.config import FAST_TEST_HASH, INTERACTIVE_MINIMUM, HashParams
from academy_sims.domain import Admin, PrincipalRef, Realm
from academy_sims.errors import (
    CsrfMismatch,
    IntegrityFailure,
    InvalidResetToken,
    InvalidSession,
    LockedOut,
    MalformedHash,
    WeakPassword,
)
from academy_sims.security import (
    CsrfService,
    PasswordHasher,
    ResetService,
    SealedBlob,
    SecretBox,
    SessionService,
    ThrottleService,
)

# ---------------------------------------------------------------------------
# password hashing
# ---------------------------------------------------------------------------


@pytest.fixture
def hasher():
    return PasswordHasher(FAST_TEST_HASH)


def test_hash_verify_round_trip(hasher):
    h = hasher.hash("secret12")
    assert hasher.verify("secret12", h) is True


def test_wrong_password_fails(hasher):
    h = hasher.hash("secret12")
    assert hasher.verify("secret13", h) is False


def test_weak_password_rejected(hasher):
    with pytest.raises(WeakPassword):
        hasher.hash("short7c")


def test_repeated_hashes_are_distinct_and_all_verify(hasher):
    hashes = {hasher.hash("secret12") for _ in range(100)}
    assert len(hashes) == 100  # random salt every time
    for h in hashes:
        assert hasher.verify("secret12", h)


def test_hash_is_self_describing(hasher):
    # verification succeeds even with a differently-parameterized hasher
    h = hasher.hash("secret12")
    other = PasswordHasher(HashParams(time_cost=2, memory_cost_kib=2048, parallelism=2))
    assert other.verify("secret12", h) is True
    assert h.startswith("$argon2id$v=19$")
    assert "secret12" not in h


def test_malformed_hash_raises(hasher):
    with pytest.raises(MalformedHash):
        hasher.verify("secret12", "not-a-hash")


def test_default_cost_meets_interactive_minimum():
    params = PasswordHasher().params
    assert params.time_cost >= INTERACTIVE_MINIMUM.time_cost
    assert params.memory_cost_kib >= INTERACTIVE_MINIMUM.memory_cost_kib
    assert params.parallelism >= INTERACTIVE_MINIMUM.parallelism


# ---------------------------------------------------------------------------
# seal / open
# ---------------------------------------------------------------------------


KEY = secrets.token_bytes(32)


def test_seal_open_empty_input():
    box = SecretBox(KEY)
    assert box.open(box.seal(b"")) == b""


def test_seal_open_round_trip():
    box = SecretBox(KEY)
    message = b"cannot be modified once encrypted"
    assert box.open(box.seal(message)) == message


def test_every_bit_flip_is_detected():
    box = SecretBox(KEY)
    blob = box.seal(b"pin:k3rlk4zk")
    fields = {"nonce": blob.nonce, "ciphertext": blob.ciphertext, "tag": blob.tag}
    for field_name, original in fields.items():
        for position in range(len(original)):
            for bit in range(8):
                mutated = bytearray(original)
                mutated[position] ^= 1 << bit
                tampered = SealedBlob(**{**fields, field_name: bytes(mutated)})
                with pytest.raises(IntegrityFailure):
                    box.open(tampered)


def test_wrong_key_is_integrity_failure():
    blob = SecretBox(KEY).seal(b"payload")
    with pytest.raises(IntegrityFailure):
        SecretBox(secrets.token_bytes(32)).open(blob)


def test_key_must_be_256_bit():
    with pytest.raises(ValueError):
        SecretBox(b"short")


def test_blob_token_round_trip():
    box = SecretBox(KEY)
    blob = box.seal(b"x" * 33)
    again = SealedBlob.from_token(blob.to_token())
    assert box.open(again) == b"x" * 33


# ---------------------------------------------------------------------------
# sessions
# ---------------------------------------------------------------------------


PRINCIPAL = PrincipalRef(Realm.ADMIN, 1)


@pytest.fixture
def sessions(store, clock):
    return SessionService(store, clock, ttl_minutes=120)


def test_issue_then_validate(sessions):
    token = sessions.issue(PRINCIPAL)
    assert sessions.validate(token) == PRINCIPAL


def test_random_tokens_never_validate(sessions):
    sessions.issue(PRINCIPAL)
    for _ in range(1000):
        with pytest.raises(InvalidSession):
            sessions.validate(secrets.token_urlsafe(16))


def test_revoked_session_rejected(sessions):
    token = sessions.issue(PRINCIPAL)
    sessions.revoke(token)
    with pytest.raises(InvalidSession):
        sessions.validate(token)


def test_expired_session_rejected(sessions, clock):
    token = sessions.issue(PRINCIPAL)
    clock.advance(minutes=121)
    with pytest.raises(InvalidSession):
        sessions.validate(token)


def test_activity_extends_idle_expiry(sessions, clock):
    token = sessions.issue(PRINCIPAL)
    for _ in range(4):
        clock.advance(minutes=100)
        assert sessions.validate(token) == PRINCIPAL
    clock.advance(minutes=121)
    with pytest.raises(InvalidSession):
        sessions.validate(token)


def test_revoke_all_spares_nominated_token(sessions):
    keep = sessions.issue(PRINCIPAL)
    drop = sessions.issue(PRINCIPAL)
    sessions.revoke_all(PRINCIPAL, except_token=keep)
    assert sessions.validate(keep) == PRINCIPAL
    with pytest.raises(InvalidSession):
        sessions.validate(drop)


# ---------------------------------------------------------------------------
# CSRF
# ---------------------------------------------------------------------------


def test_csrf_binds_to_session(store, clock):
    sessions = SessionService(store, clock)
    csrf = CsrfService(store)
    s1 = sessions.issue(PRINCIPAL)
    s2 = sessions.issue(PRINCIPAL)
    t1 = csrf.issue(s1)
    t2 = csrf.issue(s2)
    csrf.validate(s1, t1)
    with pytest.raises(CsrfMismatch):
        csrf.validate(s1, t2)
    with pytest.raises(CsrfMismatch):
        csrf.validate(s2, t1)


def test_csrf_issue_is_stable_per_session(store, clock):
    sessions = SessionService(store, clock)
    csrf = CsrfService(store)
    s = sessions.issue(PRINCIPAL)
    assert csrf.issue(s) == csrf.issue(s)


def test_csrf_rejects_all_prefixes(store, clock):
    sessions = SessionService(store, clock)
    csrf = CsrfService(store)
    s = sessions.issue(PRINCIPAL)
    token = csrf.issue(s)
    for cut in range(len(token)):
        with pytest.raises(CsrfMismatch):
            csrf.validate(s, token[:cut])
    with pytest.raises(CsrfMismatch):
        csrf.validate(s, None)


# ---------------------------------------------------------------------------
# password reset
# ---------------------------------------------------------------------------


@pytest.fixture
def reset_env(store, clock, fast_hasher):
    sessions = SessionService(store, clock)
    box = SecretBox(KEY)
    admin = store.admins.insert(Admin(
        name="A", email="admin@academy.example",
        password_hash=fast_hasher.hash("oldpass99"),
    ))
    service = ResetService(store, clock, fast_hasher, sessions, box)
    return store, clock, fast_hasher, sessions, box, admin, service


def _delivered_token(store, box) -> str:
    import json

    records = store.audit.list(action="password_reset_requested")
    sealed = SealedBlob.from_token(records[-1].details["delivery"])
    return json.loads(box.open(sealed))["token"]


def test_reset_flow_replaces_password_and_revokes_sessions(reset_env):
    store, clock, hasher, sessions, box, admin, service = reset_env
    session = sessions.issue(admin.ref)
    service.begin("admin@academy.example")
    token = _delivered_token(store, box)
    service.complete(token, "newpass99")
    account = store.admins.get(admin.id)
    assert hasher.verify("newpass99", account.password_hash)
    assert not hasher.verify("oldpass99", account.password_hash)
    with pytest.raises(InvalidSession):
        sessions.validate(session)


def test_reset_token_single_use(reset_env):
    store, clock, hasher, sessions, box, admin, service = reset_env
    service.begin("admin@academy.example")
    token = _delivered_token(store, box)
    service.complete(token, "newpass99")
    with pytest.raises(InvalidResetToken):
        service.complete(token, "anotherpass1")


def test_reset_token_expires(reset_env):
    store, clock, hasher, sessions, box, admin, service = reset_env
    service.begin("admin@academy.example")
    token = _delivered_token(store, box)
    clock.advance(minutes=31)
    with pytest.raises(InvalidResetToken):
        service.complete(token, "newpass99")


def test_weak_replacement_password_leaves_token_usable(reset_env):
    store, clock, hasher, sessions, box, admin, service = reset_env
    service.begin("admin@academy.example")
    token = _delivered_token(store, box)
    with pytest.raises(WeakPassword):
        service.complete(token, "short")
    service.complete(token, "newpass99")  # still valid


def test_begin_for_unknown_email_persists_nothing(reset_env):
    store, clock, hasher, sessions, box, admin, service = reset_env
    service.begin("ghost@academy.example")
    assert store.reset_tokens.count() == 0
    assert store.audit.list(action="password_reset_requested") == []


# ---------------------------------------------------------------------------
# throttling
# ---------------------------------------------------------------------------


@pytest.fixture
def throttle(store, clock):
    return ThrottleService(store, clock, max_failures=5, window_minutes=15)


def test_four_failures_still_allowed(throttle):
    for _ in range(4):
        throttle.record_failure("k")
    throttle.check("k")


def test_five_failures_lock_out(throttle):
    for _ in range(5):
        throttle.record_failure("k")
    with pytest.raises(LockedOut):
        throttle.check("k")


def test_success_resets_counter(throttle):
    for _ in range(4):
        throttle.record_failure("k")
    throttle.reset("k")
    for _ in range(4):
        throttle.record_failure("k")
    throttle.check("k")


def test_lockout_clears_when_window_elapses(store, clock):
    # sweep the simulated clock across the window boundary
    throttle = ThrottleService(store, clock, max_failures=5, window_minutes=15)
    for _ in range(5):
        throttle.record_failure("k")
    for advance, locked in ((1, True), (4, True), (9, True), (0.99, True), (0.02, False)):
        clock.advance(minutes=advance)
        if locked:
            with pytest.raises(LockedOut):
                throttle.check("k")
        else:
            throttle.check("k")


def test_keys_are_independent(throttle):
    for _ in range(5):
        throttle.record_failure("a")
    throttle.check("b")
    with pytest.raises(LockedOut):
        throttle.check("a")


@settings(max_examples=25)
@given(st.lists(st.sampled_from(["fail", "ok"]), max_size=12))
def test_throttle_never_locks_below_threshold(tmp_path_factory, events):
    from academy_sims.clock import ManualClock
    from academy_sims.store import Store

    path = tmp_path_factory.mktemp("throttle") / "t.db"
    store = Store(str(path), ManualClock())
    store.migrate()
    throttle = ThrottleService(store, store.clock, max_failures=5, window_minutes=15)
    consecutive = 0
    for event in events:
        if event == "fail":
            throttle.record_failure("k")
            consecutive += 1
        else:
            throttle.reset("k")
            consecutive = 0
        if consecutive < 5:
            throttle.check("k")
    store.close()
