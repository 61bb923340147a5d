"""Composition root: builds the store and services from one config."""

from __future__ import annotations

from dataclasses import dataclass, field

from .academics import AcademicsService
from .clock import Clock, SystemClock
from .config import ServiceConfig
from .onboarding import OnboardingService
from .security import (
    CsrfService,
    PasswordHasher,
    ResetService,
    SecretBox,
    SessionService,
    ThrottleService,
)
from .store import Store
from .store.state import AuditRepo


class _NullAuditRepo(AuditRepo):
    """Deliberate fault mode (scanner validation): writes vanish."""

    def append(self, actor, action, target, details=None) -> None:
        return None


@dataclass
class Runtime:
    config: ServiceConfig
    clock: Clock
    store: Store
    hasher: PasswordHasher
    box: SecretBox
    sessions: SessionService
    csrf: CsrfService
    reset: ResetService
    throttle: ThrottleService
    onboarding: OnboardingService
    academics: AcademicsService
    response_log: list[str] = field(default_factory=list)

    def close(self) -> None:
        self.store.close()


def build_runtime(config: ServiceConfig, clock: Clock | None = None) -> Runtime:
    clock = clock or SystemClock()
    store = Store(config.storage_path, clock)
    if config.weakened("a10"):
        store.audit = _NullAuditRepo(store)
    hasher = PasswordHasher(config.hash_params)
    box = SecretBox(config.encryption_key)
    sessions = SessionService(store, clock, config.session_ttl_minutes)
    csrf = CsrfService(store)
    reset = ResetService(store, clock, hasher, sessions, box)
    throttle = ThrottleService(
        store, clock,
        max_failures=config.throttle_max_failures,
        window_minutes=config.throttle_window_minutes,
        enabled=not config.weakened("a2"),
    )
    onboarding = OnboardingService(store, hasher, clock, config.max_roster_lines)
    academics = AcademicsService(store, clock, config.upload_dir,
                                 config.max_material_bytes)
    return Runtime(
        config=config, clock=clock, store=store, hasher=hasher, box=box,
        sessions=sessions, csrf=csrf, reset=reset, throttle=throttle,
        onboarding=onboarding, academics=academics,
    )
