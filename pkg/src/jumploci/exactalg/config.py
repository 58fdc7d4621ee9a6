"""Resource guards and sampling configuration shared by all kernels."""

from __future__ import annotations

import contextlib
import contextvars
import os
import time
from dataclasses import dataclass, replace

DEFAULT_SEED = 0x5EED


class ResourceLimitError(RuntimeError):
    """A Gröbner/elimination computation exceeded a configured guard."""

    def __init__(self, message: str, ideal: str | None = None):
        self.ideal = ideal
        if ideal is not None:
            message = f"{message} (ideal: {ideal})"
        super().__init__(message)


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    samples: int = 100
    max_basis_size: int = 4000
    max_degree: int = 64
    time_limit: float = 600.0
    output_format: str = "json"

    def __post_init__(self):
        for name in ("samples", "max_basis_size", "max_degree"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.time_limit <= 0:
            raise ValueError("time_limit must be positive")
        if self.output_format not in ("json", "text"):
            raise ValueError("output_format must be 'json' or 'text'")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "RunConfig":
        """Defaults, then ``JUMPLOCI_*`` environment variables, then overrides."""
        env = os.environ if environ is None else environ
        values = {}
        table = {
            "JUMPLOCI_SEED": ("seed", lambda s: int(s, 0)),
            "JUMPLOCI_SAMPLES": ("samples", int),
            "JUMPLOCI_MAX_BASIS": ("max_basis_size", int),
            "JUMPLOCI_MAX_DEGREE": ("max_degree", int),
            "JUMPLOCI_TIME_LIMIT": ("time_limit", float),
        }
        for var, (field, conv) in table.items():
            if var in env:
                values[field] = conv(env[var])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **changes)


_current: contextvars.ContextVar[RunConfig] = contextvars.ContextVar(
    "jumploci_config", default=RunConfig()
)


def current() -> RunConfig:
    return _current.get()


@contextlib.contextmanager
def using(config: RunConfig):
    token = _current.set(config)
    try:
        yield config
    finally:
        _current.reset(token)


class Deadline:
    """Wall-clock guard for one ideal operation."""

    __slots__ = ("limit", "start", "label")

    def __init__(self, label: str, limit: float | None = None):
        self.limit = current().time_limit if limit is None else limit
        self.start = time.monotonic()
        self.label = label

    def check(self):
        if time.monotonic() - self.start > self.limit:
            raise ResourceLimitError(
                f"wall-time limit of {self.limit:g}s exceeded", self.label
            )
