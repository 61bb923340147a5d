"""Security-state repositories: auth sessions, CSRF bindings, reset tokens,
throttle counters, and the append-only audit log. Living in the store means
they inherit its transactional guarantees."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from sqlite3 import Row

from ..domain import PrincipalRef, Realm
from .base import StoreBase, from_iso, iso


class StateRepoBase:
    def __init__(self, db: StoreBase):
        self.db = db


@dataclass(frozen=True)
class SessionRow:
    token_id: str
    realm: Realm
    principal_id: int
    issued_at: datetime
    expires_at: datetime
    revoked: bool


def _session_from_row(row: Row) -> SessionRow:
    return SessionRow(
        token_id=row["token_id"], realm=Realm(row["realm"]),
        principal_id=row["principal_id"], issued_at=from_iso(row["issued_at"]),
        expires_at=from_iso(row["expires_at"]), revoked=bool(row["revoked"]),
    )


class AuthSessionRepo(StateRepoBase):
    def insert(self, token_id: str, principal: PrincipalRef,
               issued_at: datetime, expires_at: datetime) -> SessionRow:
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO auth_sessions (token_id, realm, principal_id, issued_at,"
                " expires_at, revoked) VALUES (?, ?, ?, ?, ?, 0)",
                (token_id, principal.realm.value, principal.id,
                 iso(issued_at), iso(expires_at)),
            )
        return SessionRow(token_id, principal.realm, principal.id,
                          issued_at, expires_at, False)

    def get(self, token_id: str) -> SessionRow | None:
        row = self.db.query_one(
            "SELECT * FROM auth_sessions WHERE token_id = ?", (token_id,)
        )
        return _session_from_row(row) if row else None

    def set_expiry(self, token_id: str, expires_at: datetime) -> None:
        with self.db.transaction():
            self.db.execute(
                "UPDATE auth_sessions SET expires_at = ? WHERE token_id = ?",
                (iso(expires_at), token_id),
            )

    def revoke(self, token_id: str) -> None:
        with self.db.transaction():
            self.db.execute(
                "UPDATE auth_sessions SET revoked = 1 WHERE token_id = ?", (token_id,)
            )

    def revoke_all(self, principal: PrincipalRef, except_token: str | None = None) -> int:
        with self.db.transaction():
            sql = "UPDATE auth_sessions SET revoked = 1 WHERE realm = ? AND principal_id = ?"
            params: list = [principal.realm.value, principal.id]
            if except_token is not None:
                sql += " AND token_id != ?"
                params.append(except_token)
            return self.db.execute(sql, tuple(params)).rowcount


class CsrfRepo(StateRepoBase):
    def get(self, session_token_id: str) -> str | None:
        row = self.db.query_one(
            "SELECT value FROM csrf_tokens WHERE session_token_id = ?",
            (session_token_id,),
        )
        return row["value"] if row else None

    def put_if_absent(self, session_token_id: str, value: str) -> str:
        """Bind a CSRF value to a session once; concurrent issuance converges
        on whichever value landed first."""
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO csrf_tokens (session_token_id, value) VALUES (?, ?)"
                " ON CONFLICT (session_token_id) DO NOTHING",
                (session_token_id, value),
            )
            return self.get(session_token_id)  # type: ignore[return-value]


@dataclass(frozen=True)
class ResetTokenRow:
    id: int
    token_hash: str
    realm: Realm
    principal_id: int
    expires_at: datetime
    used: bool


class ResetTokenRepo(StateRepoBase):
    def insert(self, token_hash: str, principal: PrincipalRef, expires_at: datetime) -> None:
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO reset_tokens (token_hash, realm, principal_id,"
                " expires_at, used, created_at) VALUES (?, ?, ?, ?, 0, ?)",
                (token_hash, principal.realm.value, principal.id,
                 iso(expires_at), self.db.now_iso()),
            )

    def get_by_hash(self, token_hash: str) -> ResetTokenRow | None:
        row = self.db.query_one(
            "SELECT * FROM reset_tokens WHERE token_hash = ?", (token_hash,)
        )
        if row is None:
            return None
        return ResetTokenRow(
            id=row["id"], token_hash=row["token_hash"], realm=Realm(row["realm"]),
            principal_id=row["principal_id"], expires_at=from_iso(row["expires_at"]),
            used=bool(row["used"]),
        )

    def consume(self, token_id: int) -> bool:
        """Single-use CAS; only one caller ever flips used false->true."""
        with self.db.transaction():
            cur = self.db.execute(
                "UPDATE reset_tokens SET used = 1 WHERE id = ? AND used = 0",
                (token_id,),
            )
            return cur.rowcount == 1

    def count(self) -> int:
        return self.db.query_one("SELECT COUNT(*) AS n FROM reset_tokens")["n"]


@dataclass(frozen=True)
class ThrottleRow:
    key: str
    failure_count: int
    window_start: datetime


class ThrottleRepo(StateRepoBase):
    def get(self, key: str) -> ThrottleRow | None:
        row = self.db.query_one("SELECT * FROM throttle_state WHERE key = ?", (key,))
        if row is None:
            return None
        return ThrottleRow(row["key"], row["failure_count"], from_iso(row["window_start"]))

    def put(self, key: str, failure_count: int, window_start: datetime) -> None:
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO throttle_state (key, failure_count, window_start)"
                " VALUES (?, ?, ?) ON CONFLICT (key) DO UPDATE SET"
                " failure_count = excluded.failure_count,"
                " window_start = excluded.window_start",
                (key, failure_count, iso(window_start)),
            )

    def delete(self, key: str) -> None:
        with self.db.transaction():
            self.db.execute("DELETE FROM throttle_state WHERE key = ?", (key,))


@dataclass(frozen=True)
class AuditRecord:
    id: int
    at: datetime
    actor: PrincipalRef | None
    action: str
    target: str
    details: dict


def _audit_from_row(row: Row) -> AuditRecord:
    actor = None
    if row["actor_realm"] is not None:
        actor = PrincipalRef(Realm(row["actor_realm"]), row["actor_id"])
    return AuditRecord(
        id=row["id"], at=from_iso(row["at"]), actor=actor, action=row["action"],
        target=row["target"], details=json.loads(row["details"]),
    )


class AuditRepo(StateRepoBase):
    """Append-only: no update or delete surface exists."""

    def append(self, actor: PrincipalRef | None, action: str, target: str,
               details: dict | None = None) -> None:
        with self.db.transaction():
            self.db.execute(
                "INSERT INTO audit_records (at, actor_realm, actor_id, action,"
                " target, details) VALUES (?, ?, ?, ?, ?, ?)",
                (self.db.now_iso(),
                 actor.realm.value if actor else None,
                 actor.id if actor else None,
                 action, target, json.dumps(details or {}, ensure_ascii=False)),
            )

    def list(self, action: str | None = None) -> list[AuditRecord]:
        if action is None:
            rows = self.db.query_all("SELECT * FROM audit_records ORDER BY id")
        else:
            rows = self.db.query_all(
                "SELECT * FROM audit_records WHERE action = ? ORDER BY id", (action,)
            )
        return [_audit_from_row(r) for r in rows]

    def count(self) -> int:
        return self.db.query_one("SELECT COUNT(*) AS n FROM audit_records")["n"]
