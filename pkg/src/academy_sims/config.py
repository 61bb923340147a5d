"""Service configuration. Everything tunable arrives here, nothing is hardcoded."""

from __future__ import annotations

import os
import secrets
from dataclasses import dataclass, field, replace

MIB = 1024 * 1024

ENV_PREFIX = "SIMS_"


@dataclass(frozen=True)
class HashParams:
    """Argon2id cost parameters. Defaults follow the RFC 9106 low-memory
    profile recommended for interactive logins (t=3, m=64 MiB, p=4)."""

    time_cost: int = 3
    memory_cost_kib: int = 64 * 1024
    parallelism: int = 4


# Floor the production defaults must never drop below.
INTERACTIVE_MINIMUM = HashParams(time_cost=3, memory_cost_kib=64 * 1024, parallelism=4)

# Cheap profile for test suites only.
FAST_TEST_HASH = HashParams(time_cost=1, memory_cost_kib=1024, parallelism=1)


@dataclass(frozen=True)
class ServiceConfig:
    storage_path: str = "sims.db"
    upload_dir: str = "uploads"
    bind_host: str = "127.0.0.1"
    bind_port: int = 8000
    encryption_key: bytes = b""          # 32 bytes; generated if left empty
    hash_params: HashParams = field(default_factory=HashParams)
    session_ttl_minutes: int = 120
    throttle_max_failures: int = 5
    throttle_window_minutes: int = 15
    json_body_limit: int = 1 * MIB
    upload_body_limit: int = 11 * MIB    # 10 MiB file rule + multipart envelope
    max_material_bytes: int = 10 * MIB
    max_roster_lines: int = 10_000
    secure_cookies: bool = False
    insecure_demo: bool = False          # disables CSRF checks; harness validation only
    weaken: frozenset[str] = frozenset() # per-category deliberate faults; never in production

    def __post_init__(self):
        if not self.encryption_key:
            object.__setattr__(self, "encryption_key", secrets.token_bytes(32))
        if len(self.encryption_key) != 32:
            raise ValueError("encryption key must be exactly 32 bytes (AES-256)")
        unknown = self.weaken - {"a1", "a2", "a3", "a5", "a6", "a7", "a10"}
        if unknown:
            raise ValueError(f"unknown weaken categories: {sorted(unknown)}")

    def weakened(self, category: str) -> bool:
        return category in self.weaken

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)

        def get(name: str, default: str) -> str:
            return env.get(ENV_PREFIX + name, default)

        key_hex = get("ENCRYPTION_KEY", "")
        return cls(
            storage_path=get("STORAGE_PATH", "sims.db"),
            upload_dir=get("UPLOAD_DIR", "uploads"),
            bind_host=get("BIND_HOST", "127.0.0.1"),
            bind_port=int(get("BIND_PORT", "8000")),
            encryption_key=bytes.fromhex(key_hex) if key_hex else b"",
            hash_params=HashParams(
                time_cost=int(get("ARGON2_TIME_COST", "3")),
                memory_cost_kib=int(get("ARGON2_MEMORY_KIB", str(64 * 1024))),
                parallelism=int(get("ARGON2_PARALLELISM", "4")),
            ),
            session_ttl_minutes=int(get("SESSION_TTL_MINUTES", "120")),
            throttle_max_failures=int(get("THROTTLE_MAX_FAILURES", "5")),
            throttle_window_minutes=int(get("THROTTLE_WINDOW_MINUTES", "15")),
        )

    def with_overrides(self, **kwargs) -> "ServiceConfig":
        return replace(self, **kwargs)
