"""Run configuration: plain key = value files, flag overrides, validation."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields

from .errors import UsageError
from .scatter import SolverConfig

ENV_CONFIG = "MONO_CONFIG"

FIELD_KINDS = ("abelian", "hedgehog", "from-nahm")


def parse_complex(text: str) -> complex:
    """Complex scalars written as 'a+bi'; 'inf' is handled by callers."""
    t = text.strip().replace(" ", "")
    if not t:
        raise UsageError("empty complex literal")
    try:
        return complex(t.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex literal {text!r}") from exc


def format_complex(z: complex) -> str:
    re = f"{z.real:.17g}"
    im = f"{abs(z.imag):.17g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{re}{sign}{im}i"


@dataclass
class RunConfig:
    field: str = "hedgehog"
    mass: float = 1.0
    charge: int = 1
    T: float | None = None
    ode_rtol: float = 1e-10
    ode_atol: float = 1e-12
    fd_step: float = 1e-3
    grid_n: int = 40
    threshold: float = 1e-3
    seed: int = 1234
    workers: int = 0  # 0 selects min(4, cpu count)

    def validate(self):
        if self.field not in FIELD_KINDS:
            raise UsageError(f"field must be one of {FIELD_KINDS}, got {self.field!r}")
        if not self.mass > 0:
            raise UsageError("mass must be positive")
        for name in ("ode_rtol", "ode_atol", "fd_step", "threshold"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.T is not None and not self.T > 0:
            raise UsageError("T must be positive")
        if self.grid_n < 8:
            raise UsageError("grid_n must be at least 8")
        if self.charge < 0:
            raise UsageError("charge must be nonnegative")
        return self

    @property
    def effective_workers(self) -> int:
        if self.workers > 0:
            return self.workers
        return min(4, os.cpu_count() or 1)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(
            ode_rtol=self.ode_rtol,
            ode_atol=self.ode_atol,
            T=self.T,
            workers=self.effective_workers,
        )

    def params_dict(self) -> dict:
        out = {}
        for f in fields(self):
            out[f.name] = getattr(self, f.name)
        return out


_FLOAT_KEYS = {"mass", "T", "ode_rtol", "ode_atol", "fd_step", "threshold"}
_INT_KEYS = {"charge", "grid_n", "seed", "workers"}


def parse_config_file(path: str) -> dict:
    """key = value lines; '#' starts a comment; unknown keys rejected."""
    out = {}
    known = {f.name for f in fields(RunConfig)}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in known:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = val
    return out


def coerce_config(values: dict) -> dict:
    out = {}
    for key, val in values.items():
        if val is None:
            continue
        if key in _FLOAT_KEYS:
            if isinstance(val, str) and val.lower() in ("none", ""):
                continue
            out[key] = float(val)
        elif key in _INT_KEYS:
            out[key] = int(val)
        else:
            out[key] = str(val)
    return out


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Config file (explicit path or MONO_CONFIG), then flag overrides."""
    merged = {}
    cfg_path = path or os.environ.get(ENV_CONFIG)
    if cfg_path and os.path.exists(cfg_path):
        merged.update(parse_config_file(cfg_path))
    elif path:
        raise UsageError(f"config file {path!r} not found")
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**coerce_config(merged)).validate()
