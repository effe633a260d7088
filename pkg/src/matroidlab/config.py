"""Resource caps. Caps are configuration, never hard-coded constants."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, replace
from typing import Optional

from .errors import InvalidParameter, ResourceLimit

ENV_PREFIX = "MATROIDLAB_"


@dataclass(frozen=True)
class Limits:
    max_bases: int = 10**6
    max_fiber_nodes: int = 10**6
    time_limit: Optional[float] = None  # seconds, per top-level search

    def __post_init__(self):
        if self.max_bases <= 0 or self.max_fiber_nodes <= 0:
            raise InvalidParameter("caps must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InvalidParameter("time limit must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "Limits":
        """Defaults, then ``MATROIDLAB_MAX_BASES`` etc., then explicit overrides."""
        values = {}
        for name, conv in (("max_bases", int), ("max_fiber_nodes", int), ("time_limit", float)):
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw:
                try:
                    values[name] = conv(raw)
                except ValueError as exc:
                    raise InvalidParameter(f"bad {ENV_PREFIX + name.upper()}={raw!r}") from exc
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **kw) -> "Limits":
        return replace(self, **kw)

    def clock(self) -> "Clock":
        return Clock(self.time_limit)


DEFAULT_LIMITS = Limits()


class Clock:
    """Deadline tracker; ``tick`` is cheap enough to call in inner loops."""

    __slots__ = ("deadline", "limit", "_n")

    def __init__(self, limit: Optional[float]):
        self.limit = limit
        self.deadline = None if limit is None else time.monotonic() + limit
        self._n = 0

    def tick(self) -> None:
        if self.deadline is None:
            return
        self._n += 1
        if self._n & 1023 == 0 and time.monotonic() > self.deadline:
            raise ResourceLimit(f"search time limit of {self.limit}s exceeded", cap=self.limit)
