"""Session configuration shared by the CLI and scripts."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .scalars import Field, field_from_name

FIELD_ENV = "ORBIFOLD_FIELD"


@dataclass(frozen=True)
class SessionConfig:
    """``field`` is "Q", "Q(sqrt:d)" or "C64"; ``epsilon`` only matters for C64;
    ``seed`` fixes every random walk; ``size_cap`` bounds Pachner walk growth
    (None: initial size + 12)."""
    field: str = "Q"
    epsilon: float = 1e-9
    seed: int = 0
    size_cap: int | None = None

    def __post_init__(self):
        field_from_name(self.field, self.epsilon)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.size_cap is not None and self.size_cap < 1:
            raise ValueError("size_cap must be positive")

    @property
    def scalar_field(self) -> Field:
        return field_from_name(self.field, self.epsilon)

    @classmethod
    def from_env(cls, **overrides) -> "SessionConfig":
        """Defaults, then ORBIFOLD_FIELD, then explicit (non-None) overrides."""
        kw = {k: v for k, v in overrides.items() if v is not None}
        env = os.environ.get(FIELD_ENV)
        if env and "field" not in kw:
            kw["field"] = env
        return cls(**kw)
