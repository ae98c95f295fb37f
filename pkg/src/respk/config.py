"""Run configuration: defaults, a ``key: value`` file named by ``RESPK_CONFIG``, and overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .amalgam import DEFAULT_NORMALIZATIONS
from .magnus import DEFAULT_TRUNC_CAP
from .pgroups import DEFAULT_ENUM_CAP
from .separation import DEFAULT_DEPTH_CAP

__all__ = ["Config", "load_config", "ConfigError", "is_prime"]


class ConfigError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Config:
    p: int = 2
    enum_cap: int = DEFAULT_ENUM_CAP
    trunc_cap: int = DEFAULT_TRUNC_CAP
    depth_cap: int = DEFAULT_DEPTH_CAP
    normalizations: tuple[str, ...] = DEFAULT_NORMALIZATIONS
    normalization_depth: int = 2
    seed: int = 0

    def __post_init__(self):
        if not is_prime(self.p):
            raise ConfigError(f"p = {self.p} is not prime")
        for name in ("enum_cap", "trunc_cap", "depth_cap", "normalization_depth"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")

    def updated(self, **changes) -> "Config":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _convert(name: str, text: str):
    if name == "normalizations":
        return tuple(s.strip() for s in text.split(",") if s.strip())
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{name} expects an integer, got {text!r}") from None


def load_config(path: str | None = None, **overrides) -> Config:
    """Defaults, then the file at ``path`` (or ``$RESPK_CONFIG``), then non-``None`` overrides."""
    path = path or os.environ.get("RESPK_CONFIG")
    known = {f.name for f in fields(Config)}
    values = {}
    if path:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, val = line.partition(":")
                if not sep:
                    raise ConfigError(f"{path}:{lineno}: expected 'key: value'")
                key = key.strip().replace("-", "_")
                if key not in known:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _convert(key, val.strip())
    return Config(**values).updated(**overrides)
