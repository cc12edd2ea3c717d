"""Runtime configuration: resource caps, default fuel, parallelism."""
from __future__ import annotations

import os
from dataclasses import dataclass, replace


class ResourceError(RuntimeError):
    """A configured cap was exceeded; results would otherwise be truncated."""


@dataclass(frozen=True)
class Config:
    cap_carrier: int = 4096
    cap_plots: int = 65536
    cap_hom: int = 4096
    fuel: int = 10_000
    jobs: int = 1
    fmt: str = "text"

    def __post_init__(self):
        for f in ("cap_carrier", "cap_plots", "cap_hom", "fuel", "jobs"):
            if getattr(self, f) < 1:
                raise ValueError(f"{f} must be positive")


def _env_int(name: str):
    v = os.environ.get(name)
    if v is None or v == "":
        return None
    try:
        return int(v)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {v!r}") from None


def from_env(base: Config = Config(), **overrides) -> Config:
    """Settings from PCFV_* variables; non-None ``overrides`` win over the environment."""
    changes = {}
    for var, f in (("PCFV_FUEL", "fuel"), ("PCFV_CAP_CARRIER", "cap_carrier"), ("PCFV_JOBS", "jobs")):
        if overrides.get(f) is not None:
            continue
        v = _env_int(var)
        if v is not None:
            changes[f] = v
    changes.update((k, v) for k, v in overrides.items() if v is not None)
    if "cap_carrier" in changes:
        changes["cap_hom"] = changes["cap_carrier"]
    return replace(base, **changes)


_current = Config()


def current() -> Config:
    return _current


def set_current(cfg: Config) -> None:
    global _current
    _current = cfg
