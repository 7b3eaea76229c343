"""Sweep and self-test configuration: a flat INI file with three sections.

    [sweep]
    alpha_list = 0, 1
    p_list = 1, 1.5, 2
    a_grid = 0.5, 1, 2
    b_grid = 0.5, 1, 3
    theorem_list = T15, T17        ; optional, default picks one per p
    catalog = all                  ; or comma-separated entry ids
    output = out
    threads = 1

    [grid]
    x_max = 8
    t_max = 16
    n_x = 256
    n_t = 512
    lambda_max = 16
    n_lambda = 16
    m_max = 64

    [tolerances]
    plancherel = 1e-6
    ...

Every key is optional; unknown sections or keys are configuration errors.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields, replace

from .catalog import default_catalog
from .errors import ConfigError
from .uncertainty import THEOREMS

__all__ = ["SweepConfig", "DEFAULT_TOLERANCES", "load_config", "parse_config"]

DEFAULT_TOLERANCES = {
    "constants": 1e-8,
    "eigen": 1e-6,
    "plancherel": 1e-6,
    "hausdorff_young": 1e-6,
    "dilation": 1e-5,
    "l1_preservation": 1e-8,
    "closed_form": 1e-6,
    "gs_norm": 1e-6,
    "scale": 1e-4,
}

_SECTIONS = {
    "sweep": ("alpha_list", "p_list", "a_grid", "b_grid", "theorem_list", "catalog", "output", "threads",
              "scale_c", "scale_r", "plots"),
    "grid": ("x_max", "t_max", "n_x", "n_t", "lambda_max", "n_lambda", "m_max"),
    "tolerances": tuple(DEFAULT_TOLERANCES),
}


@dataclass(frozen=True)
class SweepConfig:
    alpha_list: tuple = (0.0,)
    p_list: tuple = (1.0, 1.5, 2.0)
    a_grid: tuple = (0.5, 1.0, 2.0)
    b_grid: tuple = (0.5, 1.0, 3.0)
    theorem_list: tuple | None = None
    x_max: float = 8.0
    t_max: float = 16.0
    n_x: int = 256
    n_t: int = 512
    lambda_max: float = 16.0
    n_lambda: int = 16
    m_max: int = 64
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    catalog: tuple = tuple(e.id for e in default_catalog())
    output: str = "out"
    threads: int = 1
    scale_c: float = 3.0
    scale_r: float = math.sqrt(2.0)
    plots: bool = True

    def space_kwargs(self):
        return {"x_max": self.x_max, "t_max": self.t_max, "n_x": self.n_x, "n_t": self.n_t}

    def dual_kwargs(self):
        return {"lambda_max": self.lambda_max, "n_lambda": self.n_lambda, "m_max": self.m_max}

    def entries(self):
        known = {e.id: e for e in default_catalog()}
        return [known[i] for i in self.catalog]

    def with_overrides(self, **kw):
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _floats(text, key):
    try:
        vals = tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected a comma-separated list of numbers, got {text!r}") from exc
    if not vals:
        raise ConfigError(f"{key}: empty list")
    if any(not math.isfinite(v) for v in vals):
        raise ConfigError(f"{key}: values must be finite")
    return vals


def _positive(text, key, kind=float):
    try:
        v = kind(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {text!r}") from exc
    if not v > 0:
        raise ConfigError(f"{key}: must be positive")
    return v


def parse_config(text, source="<string>"):
    """Parse configuration text into a ``SweepConfig``."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    kw = {}
    tol = dict(DEFAULT_TOLERANCES)
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"{source}: unknown section [{section}]")
        for key, value in parser.items(section):
            if key not in _SECTIONS[section]:
                raise ConfigError(f"{source}: unknown key {key!r} in [{section}]")
            if section == "tolerances":
                tol[key] = _positive(value, key)
            elif key in ("alpha_list", "p_list", "a_grid", "b_grid"):
                kw[key] = _floats(value, key)
            elif key == "theorem_list":
                ids = tuple(v.strip().upper() for v in value.split(",") if v.strip())
                bad = [i for i in ids if i not in THEOREMS]
                if bad or not ids:
                    raise ConfigError(f"theorem_list: unknown ids {bad}; choose from {THEOREMS}")
                kw[key] = ids
            elif key == "catalog":
                known = [e.id for e in default_catalog()]
                if value.strip().lower() == "all":
                    kw[key] = tuple(known)
                else:
                    ids = tuple(v.strip() for v in value.split(",") if v.strip())
                    bad = [i for i in ids if i not in known]
                    if bad or not ids:
                        raise ConfigError(f"catalog: unknown entries {bad}")
                    kw[key] = ids
            elif key == "output":
                kw[key] = value.strip()
            elif key == "plots":
                try:
                    kw[key] = parser.getboolean(section, key)
                except ValueError as exc:
                    raise ConfigError(f"plots: expected a boolean, got {value!r}") from exc
            elif key in ("threads", "n_x", "n_t", "n_lambda", "m_max"):
                kw[key] = _positive(value, key, int)
            else:
                kw[key] = _positive(value, key)
    if any(a < 0 for a in kw.get("alpha_list", ())):
        raise ConfigError("alpha_list: alpha must be >= 0")
    if any(p < 1 for p in kw.get("p_list", ())):
        raise ConfigError("p_list: exponents must be >= 1")
    for key in ("a_grid", "b_grid"):
        if any(v <= 0 for v in kw.get(key, ())):
            raise ConfigError(f"{key}: entries must be positive")
    return SweepConfig(tolerances=tol, **kw)


def load_config(path):
    if path is None:
        return SweepConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, source=str(path))


def config_fields():
    return [f.name for f in fields(SweepConfig)]
