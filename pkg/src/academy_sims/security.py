"""Security primitives: password hashing, authenticated encryption, session
and CSRF tokens, password reset, and login throttling.

All secret comparisons go through constant-time primitives; every token is
drawn from the process CSPRNG with at least 256 bits of entropy.
"""

from __future__ import annotations

import base64
import hashlib
import hmac
import json
import re
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM
from cryptography.hazmat.primitives.kdf.argon2 import Argon2id

from .clock import Clock
from .config import HashParams
from .domain import PrincipalRef, Realm
from .errors import (
    IntegrityFailure,
    InvalidResetToken,
    InvalidSession,
    LockedOut,
    MalformedHash,
    WeakPassword,
)
from .store import Store

MIN_PASSWORD_LENGTH = 8
RESET_TOKEN_TTL_MINUTES = 30


# ---------------------------------------------------------------------------
# password hashing (Argon2id, PHC string format)
# ---------------------------------------------------------------------------


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii").rstrip("=")


def _unb64(text: str) -> bytes:
    return base64.b64decode(text + "=" * (-len(text) % 4))


_PHC_PATTERN = re.compile(
    r"^\$argon2id\$v=19\$m=(\d+),t=(\d+),p=(\d+)\$([A-Za-z0-9+/]+)\$([A-Za-z0-9+/]+)$"
)


class PasswordHasher:
    """Argon2id with self-describing PHC output, so stored hashes verify
    regardless of the parameters in force when they were written."""

    DIGEST_LENGTH = 32
    SALT_LENGTH = 16

    def __init__(self, params: HashParams | None = None):
        self.params = params or HashParams()

    def hash(self, plaintext: str) -> str:
        if len(plaintext) < MIN_PASSWORD_LENGTH:
            raise WeakPassword()
        salt = secrets.token_bytes(self.SALT_LENGTH)
        digest = self._derive(plaintext, salt, self.params)
        p = self.params
        return (
            f"$argon2id$v=19$m={p.memory_cost_kib},t={p.time_cost},p={p.parallelism}"
            f"${_b64(salt)}${_b64(digest)}"
        )

    def verify(self, plaintext: str, hash_text: str) -> bool:
        match = _PHC_PATTERN.match(hash_text)
        if not match:
            raise MalformedHash()
        memory, time_cost, parallelism, salt_b64, digest_b64 = match.groups()
        params = HashParams(
            time_cost=int(time_cost),
            memory_cost_kib=int(memory),
            parallelism=int(parallelism),
        )
        expected = _unb64(digest_b64)
        candidate = self._derive(plaintext, _unb64(salt_b64), params, len(expected))
        return hmac.compare_digest(candidate, expected)

    @staticmethod
    def _derive(plaintext: str, salt: bytes, params: HashParams,
                length: int = DIGEST_LENGTH) -> bytes:
        kdf = Argon2id(
            salt=salt,
            length=length,
            iterations=params.time_cost,
            lanes=params.parallelism,
            memory_cost=params.memory_cost_kib,
        )
        return kdf.derive(plaintext.encode("utf-8"))


# ---------------------------------------------------------------------------
# authenticated encryption (AES-256-GCM)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SealedBlob:
    nonce: bytes
    ciphertext: bytes
    tag: bytes

    def to_token(self) -> str:
        return base64.urlsafe_b64encode(self.nonce + self.ciphertext + self.tag).decode("ascii")

    @classmethod
    def from_token(cls, token: str) -> "SealedBlob":
        try:
            raw = base64.urlsafe_b64decode(token.encode("ascii"))
        except Exception as exc:
            raise IntegrityFailure() from exc
        if len(raw) < SecretBox.NONCE_LENGTH + SecretBox.TAG_LENGTH:
            raise IntegrityFailure()
        nonce = raw[: SecretBox.NONCE_LENGTH]
        tag = raw[-SecretBox.TAG_LENGTH:]
        ciphertext = raw[SecretBox.NONCE_LENGTH : -SecretBox.TAG_LENGTH]
        return cls(nonce=nonce, ciphertext=ciphertext, tag=tag)


class SecretBox:
    """AES-256-GCM seal/open. Decryption fails loudly on any single-bit
    change to nonce, ciphertext, or tag; a wrong key is indistinguishable
    from tampering."""

    NONCE_LENGTH = 12
    TAG_LENGTH = 16

    def __init__(self, key: bytes):
        if len(key) != 32:
            raise ValueError("SecretBox requires a 256-bit key")
        self._aead = AESGCM(key)

    def seal(self, plaintext: bytes) -> SealedBlob:
        nonce = secrets.token_bytes(self.NONCE_LENGTH)
        combined = self._aead.encrypt(nonce, plaintext, None)
        return SealedBlob(
            nonce=nonce,
            ciphertext=combined[: -self.TAG_LENGTH],
            tag=combined[-self.TAG_LENGTH:],
        )

    def open(self, blob: SealedBlob) -> bytes:
        try:
            return self._aead.decrypt(blob.nonce, blob.ciphertext + blob.tag, None)
        except InvalidTag as exc:
            raise IntegrityFailure() from exc


# ---------------------------------------------------------------------------
# sessions
# ---------------------------------------------------------------------------


def new_token() -> str:
    return secrets.token_urlsafe(32)  # 256 bits


class SessionService:
    def __init__(self, store: Store, clock: Clock, ttl_minutes: int = 120):
        self.store = store
        self.clock = clock
        self.ttl = timedelta(minutes=ttl_minutes)

    def issue(self, principal: PrincipalRef) -> str:
        token_id = new_token()
        now = self.clock.now()
        self.store.auth_sessions.insert(token_id, principal, now, now + self.ttl)
        return token_id

    def validate(self, token_id: str) -> PrincipalRef:
        """One error for unknown, expired, and revoked: no oracle."""
        row = self.store.auth_sessions.get(token_id) if token_id else None
        if row is None or row.revoked:
            raise InvalidSession()
        now = self.clock.now()
        if now >= row.expires_at:
            raise InvalidSession()
        # idle expiry: activity pushes the deadline out
        self.store.auth_sessions.set_expiry(token_id, now + self.ttl)
        return PrincipalRef(row.realm, row.principal_id)

    def revoke(self, token_id: str) -> None:
        self.store.auth_sessions.revoke(token_id)

    def revoke_all(self, principal: PrincipalRef, except_token: str | None = None) -> int:
        return self.store.auth_sessions.revoke_all(principal, except_token)


class CsrfService:
    """Per-session synchronizer token, required on every state-changing
    request that rides a session."""

    def __init__(self, store: Store):
        self.store = store

    def issue(self, session_token_id: str) -> str:
        existing = self.store.csrf_tokens.get(session_token_id)
        if existing is not None:
            return existing
        return self.store.csrf_tokens.put_if_absent(session_token_id, new_token())

    def validate(self, session_token_id: str, supplied: str | None) -> None:
        from .errors import CsrfMismatch

        stored = self.store.csrf_tokens.get(session_token_id)
        if stored is None or supplied is None:
            raise CsrfMismatch()
        if not hmac.compare_digest(stored.encode(), supplied.encode()):
            raise CsrfMismatch()


# ---------------------------------------------------------------------------
# password reset
# ---------------------------------------------------------------------------


def _token_hash(value: str) -> str:
    return hashlib.sha256(value.encode("utf-8")).hexdigest()


class ResetService:
    """Reset tokens are stored hashed; delivery (in place of email) is a
    sealed copy in the audit log that only the configured key can open."""

    def __init__(self, store: Store, clock: Clock, hasher: PasswordHasher,
                 sessions: SessionService, box: SecretBox):
        self.store = store
        self.clock = clock
        self.hasher = hasher
        self.sessions = sessions
        self.box = box

    def begin(self, email: str) -> None:
        """Uniform externally whether or not the email exists."""
        principal = self._find_principal(email)
        if principal is None:
            return
        value = new_token()
        expires = self.clock.now() + timedelta(minutes=RESET_TOKEN_TTL_MINUTES)
        with self.store.transaction():
            self.store.reset_tokens.insert(_token_hash(value), principal, expires)
            sealed = self.box.seal(json.dumps({"token": value}).encode("utf-8"))
            self.store.audit.append(
                None, "password_reset_requested", str(principal),
                {"delivery": sealed.to_token()},
            )

    def complete(self, token_value: str, new_password: str) -> PrincipalRef:
        if len(new_password) < MIN_PASSWORD_LENGTH:
            raise WeakPassword()
        row = self.store.reset_tokens.get_by_hash(_token_hash(token_value))
        if row is None or row.used or self.clock.now() >= row.expires_at:
            raise InvalidResetToken()
        principal = PrincipalRef(row.realm, row.principal_id)
        new_hash = self.hasher.hash(new_password)
        with self.store.transaction():
            if not self.store.reset_tokens.consume(row.id):
                raise InvalidResetToken()
            self._replace_password_hash(principal, new_hash)
            self.sessions.revoke_all(principal)
            self.store.audit.append(principal, "password_reset_completed",
                                    str(principal))
        return principal

    def _find_principal(self, email: str) -> PrincipalRef | None:
        admin = self.store.admins.get_by_email(email)
        if admin:
            return admin.ref
        staff = self.store.staff.get_by_email(email)
        if staff:
            return staff.ref
        cadet = self.store.cadets.get_by_email(email)
        if cadet:
            return cadet.ref
        return None

    def _replace_password_hash(self, principal: PrincipalRef, new_hash: str) -> None:
        from dataclasses import replace

        if principal.realm == Realm.ADMIN:
            account = self.store.admins.get(principal.id)
            self.store.admins.update(replace(account, password_hash=new_hash))
        elif principal.realm == Realm.STAFF:
            account = self.store.staff.get(principal.id)
            self.store.staff.update(replace(account, password_hash=new_hash))
        else:
            account = self.store.cadets.get(principal.id)
            self.store.cadets.update(replace(account, password_hash=new_hash))


# ---------------------------------------------------------------------------
# login throttling
# ---------------------------------------------------------------------------


class ThrottleService:
    """N failures inside the window lock the key out until the window that
    started at the first failure elapses; success clears the counter."""

    def __init__(self, store: Store, clock: Clock,
                 max_failures: int = 5, window_minutes: int = 15,
                 enabled: bool = True):
        self.store = store
        self.clock = clock
        self.max_failures = max_failures
        self.window = timedelta(minutes=window_minutes)
        self.enabled = enabled

    def check(self, key: str) -> None:
        if not self.enabled:
            return
        row = self.store.throttle.get(key)
        if row is None:
            return
        if self.clock.now() >= row.window_start + self.window:
            self.store.throttle.delete(key)
            return
        if row.failure_count >= self.max_failures:
            raise LockedOut()

    def record_failure(self, key: str) -> None:
        if not self.enabled:
            return
        now = self.clock.now()
        with self.store.transaction():
            row = self.store.throttle.get(key)
            if row is None or now >= row.window_start + self.window:
                self.store.throttle.put(key, 1, now)
            else:
                self.store.throttle.put(key, row.failure_count + 1, row.window_start)

    def reset(self, key: str) -> None:
        if not self.enabled:
            return
        self.store.throttle.delete(key)
