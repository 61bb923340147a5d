"""SQLite-backed store: connection handling, transactions, migrations.

Every query in this package is parameterized; caller-supplied text never
reaches query syntax. Each thread gets its own connection; writers serialize
through BEGIN IMMEDIATE, which is what makes the pin-redemption CAS
linearizable.
"""

from __future__ import annotations

import re
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources

from ..clock import Clock, SystemClock
from ..errors import (
    DuplicateKey,
    ForeignKeyViolation,
    StorageUnavailable,
    ValidationFailed,
)

BUSY_TIMEOUT_MS = 30_000

_MIGRATION_NAME = re.compile(r"^(\d{4})_([a-z0-9_]+)\.sql$")


@dataclass(frozen=True)
class Migration:
    ordinal: int
    description: str
    applied_at: datetime | None = None


def iso(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat()


def from_iso(text: str | None) -> datetime | None:
    return datetime.fromisoformat(text) if text else None


def load_migrations() -> list[tuple[int, str, str]]:
    """(ordinal, description, sql) triples, sorted by ordinal."""
    out = []
    root = resources.files(__package__) / "migrations"
    for entry in root.iterdir():
        match = _MIGRATION_NAME.match(entry.name)
        if match:
            out.append((int(match.group(1)), match.group(2), entry.read_text("utf-8")))
    out.sort()
    return out


def _split_statements(sql: str):
    """Yield complete statements from a migration script; executescript would
    auto-commit the surrounding transaction, so scripts run statement-wise."""
    buffer: list[str] = []
    for line in sql.splitlines():
        buffer.append(line)
        candidate = "\n".join(buffer)
        if sqlite3.complete_statement(candidate):
            statement = candidate.strip()
            if statement:
                yield statement
            buffer = []
    tail = "\n".join(buffer).strip()
    if tail:
        yield tail


def translate_integrity_error(exc: sqlite3.IntegrityError) -> Exception:
    text = str(exc)
    if text.startswith("UNIQUE constraint failed"):
        return DuplicateKey(f"duplicate value for {text.split(': ', 1)[-1]}")
    if "FOREIGN KEY constraint failed" in text:
        return ForeignKeyViolation()
    return ValidationFailed("storage constraint violated")


class StoreBase:
    def __init__(self, path: str, clock: Clock | None = None):
        self.path = path
        self.clock = clock or SystemClock()
        self._local = threading.local()
        self._all_connections: list[sqlite3.Connection] = []
        self._connections_lock = threading.Lock()
        self._conn()  # fail fast if the path is unusable

    # -- connections ---------------------------------------------------------

    def _conn(self) -> sqlite3.Connection:
        conn = getattr(self._local, "conn", None)
        if conn is None:
            try:
                conn = sqlite3.connect(
                    self.path,
                    timeout=BUSY_TIMEOUT_MS / 1000,
                    isolation_level=None,  # explicit transaction control
                )
            except sqlite3.Error as exc:
                raise StorageUnavailable(f"cannot open storage: {exc}") from exc
            conn.row_factory = sqlite3.Row
            conn.execute("PRAGMA foreign_keys = ON")
            conn.execute("PRAGMA journal_mode = WAL")
            conn.execute(f"PRAGMA busy_timeout = {BUSY_TIMEOUT_MS}")
            self._local.conn = conn
            with self._connections_lock:
                self._all_connections.append(conn)
        return conn

    def close(self) -> None:
        with self._connections_lock:
            for conn in self._all_connections:
                try:
                    conn.close()
                except sqlite3.Error:
                    pass
            self._all_connections.clear()
        self._local = threading.local()

    # -- transactions ----------------------------------------------------------

    @contextmanager
    def transaction(self):
        """Atomic unit of work. Nested calls become savepoints, so a failed
        inner step never leaves partial effects in the outer transaction."""
        conn = self._conn()
        depth = getattr(self._local, "txn_depth", 0)
        if depth == 0:
            conn.execute("BEGIN IMMEDIATE")
        else:
            conn.execute(f"SAVEPOINT sp_{depth}")
        self._local.txn_depth = depth + 1
        try:
            yield conn
        except BaseException:
            if depth == 0:
                conn.execute("ROLLBACK")
            else:
                conn.execute(f"ROLLBACK TO sp_{depth}")
                conn.execute(f"RELEASE sp_{depth}")
            raise
        else:
            if depth == 0:
                conn.execute("COMMIT")
            else:
                conn.execute(f"RELEASE sp_{depth}")
        finally:
            self._local.txn_depth = depth

    def execute(self, sql: str, params: tuple = ()) -> sqlite3.Cursor:
        try:
            return self._conn().execute(sql, params)
        except sqlite3.IntegrityError as exc:
            raise translate_integrity_error(exc) from exc

    def query_one(self, sql: str, params: tuple = ()) -> sqlite3.Row | None:
        return self.execute(sql, params).fetchone()

    def query_all(self, sql: str, params: tuple = ()) -> list[sqlite3.Row]:
        return self.execute(sql, params).fetchall()

    def now(self) -> datetime:
        return self.clock.now()

    def now_iso(self) -> str:
        return iso(self.clock.now())

    # -- migrations ------------------------------------------------------------

    def _ensure_migrations_table(self) -> None:
        self.execute(
            "CREATE TABLE IF NOT EXISTS schema_migrations ("
            " ordinal INTEGER PRIMARY KEY,"
            " description TEXT NOT NULL,"
            " applied_at TEXT NOT NULL)"
        )

    def applied_migrations(self) -> list[Migration]:
        self._ensure_migrations_table()
        rows = self.query_all("SELECT * FROM schema_migrations ORDER BY ordinal")
        return [
            Migration(row["ordinal"], row["description"], from_iso(row["applied_at"]))
            for row in rows
        ]

    def pending_migrations(self) -> list[tuple[int, str, str]]:
        applied = {m.ordinal for m in self.applied_migrations()}
        return [m for m in load_migrations() if m[0] not in applied]

    def migrate(self) -> list[Migration]:
        """Apply pending migrations in ordinal order. Idempotent: each file
        runs atomically together with its bookkeeping row."""
        applied = []
        for ordinal, description, sql in self.pending_migrations():
            with self.transaction() as conn:
                for statement in _split_statements(sql):
                    conn.execute(statement)
                conn.execute(
                    "INSERT INTO schema_migrations (ordinal, description, applied_at)"
                    " VALUES (?, ?, ?)",
                    (ordinal, description, self.now_iso()),
                )
            applied.append(Migration(ordinal, description, self.now()))
        return applied

    def is_migrated(self) -> bool:
        return not self.pending_migrations()
