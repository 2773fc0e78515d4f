"""Order caps and output options.

Caps exist to turn accidental combinatorial blowups into clean errors; all
shipped tests and demos run far below them.  Each cap can be overridden by an
environment variable (``QFORMS_ABELIAN_CAP``, ``QFORMS_GROUP_CAP``,
``QFORMS_SOLVE_CAP``) or per call where an operation takes a ``cap`` argument.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import InvalidInputError, ResourceLimitError

_ENV = {
    "abelian_cap": "QFORMS_ABELIAN_CAP",
    "group_cap": "QFORMS_GROUP_CAP",
    "solve_cap": "QFORMS_SOLVE_CAP",
}


@dataclass
class Config:
    abelian_cap: int = 512  # largest finite abelian group handled elementwise
    group_cap: int = 64     # largest Cayley-table group
    solve_cap: int = 32     # largest N in the cochain linear solver
    parallel: bool = False  # reserved; current engines are single-process
    output: str = "both"    # "text" | "structured" | "both"

    def __post_init__(self) -> None:
        for name in ("abelian_cap", "group_cap", "solve_cap"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be positive")
        if self.output not in ("text", "structured", "both"):
            raise InvalidInputError(f"unknown output format {self.output!r}")

    @classmethod
    def from_env(cls) -> "Config":
        kwargs = {}
        for field, var in _ENV.items():
            raw = os.environ.get(var)
            if raw is not None:
                kwargs[field] = int(raw)
        return cls(**kwargs)


_active = Config.from_env()


def active() -> Config:
    return _active


def set_active(config: Config) -> None:
    global _active
    _active = config


def check_cap(value: int, cap: int | None, which: str) -> None:
    """Raise ResourceLimitError if ``value`` exceeds the effective cap."""
    limit = cap if cap is not None else getattr(_active, which)
    if value > limit:
        raise ResourceLimitError(
            f"order {value} exceeds the {which.replace('_', ' ')} of {limit}"
        )
