"""Injectable time source; expiry and throttling stay deterministic in tests."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from typing import Protocol


class Clock(Protocol):
    def now(self) -> datetime: ...


class SystemClock:
    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class ManualClock:
    """Test clock: starts at a fixed instant and only moves when told."""

    def __init__(self, start: datetime | None = None):
        self._now = start or datetime(2019, 1, 1, tzinfo=timezone.utc)

    def now(self) -> datetime:
        return self._now

    def advance(self, *, seconds: float = 0, minutes: float = 0) -> None:
        self._now += timedelta(seconds=seconds, minutes=minutes)

    def set(self, instant: datetime) -> None:
        self._now = instant
