"""Resource caps and run configuration.

Every capped search raises :class:`~prorank.errors.Undecided` naming the cap
that fired. Defaults can be overridden per call or through ``PRORANK_CAP_*``
environment variables (read by :func:`caps_from_env`).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_PREFIX = "PRORANK_"


@dataclass(frozen=True)
class Caps:
    order: int = 2000            # elaborated FiniteGroup order
    subgroups: int = 512         # largest group whose subgroups we enumerate
    steps: int = 10**9           # eval_naive atomic assignment budget
    search: int = 2_000_000      # generator tuples / isomorphism nodes
    tower_order: int = 12_000_000  # tower levels (table-free groups)
    tower_depth: int = 12
    table: int = 4096            # materialize Cayley tables up to this order

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"cap {f.name} must be positive")

    def with_(self, **kw) -> "Caps":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


DEFAULT_CAPS = Caps()


def caps_from_env(base: Caps = DEFAULT_CAPS, environ=None) -> Caps:
    environ = os.environ if environ is None else environ
    kw = {}
    for f in fields(base):
        key = f"{ENV_PREFIX}CAP_{f.name.upper()}"
        if key in environ:
            kw[f.name] = int(environ[key])
    return replace(base, **kw)


@dataclass(frozen=True)
class RunConfig:
    caps: Caps = DEFAULT_CAPS
    jobs: int = 1
    format: str = "text"     # text | structured
    seed: int = 0            # fuzz corpora only
    timing: bool = False     # include millis in structured output

    def __post_init__(self):
        if self.jobs <= 0:
            raise ValueError("jobs must be positive")
        if self.format not in ("text", "structured"):
            raise ValueError(f"unknown format {self.format!r}")
