"""Scenario configuration: a flat ``key = value`` file under a ``[scenario]`` header.

Numbers may be written as arithmetic over ``pi`` (``phi = 2*pi/3``); grids as a
comma list or an inclusive ``start:stop:step`` range.  Spins are given as the
integer ``two_j`` (``two_j = 1,2,3`` means j = 1/2, 1, 3/2).
"""
from __future__ import annotations

import ast
import configparser
import dataclasses
import math
import operator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from .errors import ConfigError
from .hamiltonians import MAX_DIM, PAULI_SCALE
from .model import MODELS

TASKS = ("sweep", "work", "lambda_max", "beta_critical", "gamma_critical")
SWEEP_AXES = ("lambda", "gamma", "phi", "beta", "sigma")
WORK_AXES = ("time", "lambda")
SERIES_KEYS = ("lambda", "gamma", "phi", "beta", "sigma")
PRESETS = ("prop1", "fig1", "fig1b", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8",
           "fig9", "fig10", "table1", "table2", "gammacrit")

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def _eval(node):
    if isinstance(node, ast.Expression):
        return _eval(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.left), _eval(node.right))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval(node.operand))
    raise ValueError("unsupported expression")


def parse_number(text: str, key: str = "value") -> float:
    try:
        value = _eval(ast.parse(str(text).strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"{key}: cannot parse number {text!r}", field=key) from exc
    if not math.isfinite(value):
        raise ConfigError(f"{key}: value must be finite", field=key)
    return value


def parse_grid(text: str, key: str = "grid") -> Tuple[float, ...]:
    text = str(text).strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"{key}: range must be start:stop:step", field=key)
        start, stop, step = (parse_number(p, key) for p in parts)
        if step <= 0 or stop < start:
            raise ConfigError(f"{key}: need step > 0 and stop >= start", field=key)
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = tuple(float(v) for v in np.round(start + step * np.arange(n), 12))
    else:
        values = tuple(parse_number(p, key) for p in text.split(",") if p.strip())
    if not values:
        raise ConfigError(f"{key}: grid is empty", field=key)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{key}: grid must be strictly ascending", field=key)
    return values


def parse_two_j(text) -> Tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        values = tuple(text)
    else:
        try:
            values = tuple(int(p) for p in str(text).split(",") if p.strip())
        except ValueError as exc:
            raise ConfigError(f"two_j: expected comma-separated integers, got {text!r}",
                              field="two_j") from exc
    if not values or any(v < 1 for v in values):
        raise ConfigError("two_j: need positive integers", field="two_j")
    return values


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "custom"
    task: str = "sweep"
    model: str = "xy"
    n: int = 4
    two_j: Tuple[int, ...] = (1,)
    axis: str = "lambda"
    grid: Tuple[float, ...] = (0.2,)
    series: Optional[str] = None
    series_values: Tuple[float, ...] = ()
    lam: float = 0.2
    gamma: float = 0.0
    phi: float = 0.0
    beta: Optional[float] = None
    omega: float = 1.0
    h: float = 1.0
    sigma: Optional[float] = None
    realizations: int = 2000
    seed: int = 0
    time: float = 2.1
    lambda_grid: Tuple[float, ...] = ()
    beta_grid: Tuple[float, ...] = ()
    gamma_grid: Tuple[float, ...] = ()
    t_max: Optional[float] = None
    coarse_step: float = 0.01
    refine_tol: float = 1e-5
    spin_scale: float = PAULI_SCALE
    thermal_on_raw: bool = False
    bbh_charger_omega_scope: str = "full"
    max_dim: int = MAX_DIM
    out: str = "results"

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    @property
    def disordered(self) -> bool:
        return self.sigma is not None or self.axis == "sigma" or self.series == "sigma"

    def validate(self) -> "ScenarioConfig":
        if self.task not in TASKS:
            raise ConfigError(f"task must be one of {TASKS}", field="task")
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}", field="model")
        if self.n < 2:
            raise ConfigError("n must be >= 2", field="n")
        parse_two_j(self.two_j)
        if self.task == "sweep" and self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}", field="axis")
        if self.task == "work" and self.axis not in WORK_AXES:
            raise ConfigError(f"work axis must be one of {WORK_AXES}", field="axis")
        if self.task == "gamma_critical" and self.axis != "lambda":
            raise ConfigError("gamma_critical sweeps lambda", field="axis")
        if self.task in ("sweep", "work", "gamma_critical"):
            _check_grid(self.grid, "grid")
        if self.series is not None:
            if self.series not in SERIES_KEYS:
                raise ConfigError(f"series must be one of {SERIES_KEYS}", field="series")
            if self.series == self.axis and self.task in ("sweep", "work", "gamma_critical"):
                raise ConfigError("series and axis must differ (exactly one sweep axis)", field="series")
            if not self.series_values:
                raise ConfigError("series needs series_values", field="series_values")
        need = {"lambda_max": "lambda_grid", "beta_critical": "beta_grid",
                "gamma_critical": "gamma_grid"}.get(self.task)
        if need:
            _check_grid(getattr(self, need), need)
        if self.task == "gamma_critical" and any(not 0 <= g <= 1 for g in self.gamma_grid):
            raise ConfigError("gamma_grid must lie in [0, 1]", field="gamma_grid")
        if self.task == "beta_critical" and any(b < 0 for b in self.beta_grid):
            raise ConfigError("beta_grid must be non-negative", field="beta_grid")
        if self.disordered and self.task not in ("sweep",):
            raise ConfigError("disorder is only supported for sweep scenarios", field="sigma")
        if self.sigma is not None and self.sigma < 0:
            raise ConfigError("sigma must be >= 0", field="sigma")
        if self.beta is not None and self.beta < 0:
            raise ConfigError("beta must be >= 0", field="beta")
        if self.omega == 0:
            raise ConfigError("omega must be non-zero", field="omega")
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1", field="realizations")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must fit in 64 bits", field="seed")
        return self

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


def _check_grid(values, key):
    if not values:
        raise ConfigError(f"{key} must not be empty", field=key)
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(np.diff(arr) <= 0):
        raise ConfigError(f"{key} must be finite and strictly ascending", field=key)


_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig)}
_GRIDS = {"grid", "series_values", "lambda_grid", "beta_grid", "gamma_grid"}
_INTS = {"n", "realizations", "seed", "max_dim"}
_OPTIONAL = {"beta", "sigma", "t_max", "series"}
_STRINGS = {"name", "task", "model", "axis", "series", "bbh_charger_omega_scope", "out"}
_ALIASES = {"lambda": "lam", "n_sites": "n"}


def coerce(key: str, raw) -> tuple:
    """Convert one textual ``key = value`` pair into a ScenarioConfig field."""
    key = _ALIASES.get(key.strip().lower(), key.strip().lower())
    if key not in _FIELDS:
        raise ConfigError(f"unknown configuration key {key!r}", field=key)
    if not isinstance(raw, str):
        return key, raw
    text = raw.strip()
    if key in _OPTIONAL and text.lower() in ("", "none", "null"):
        return key, None
    if key in _STRINGS:
        return key, text.lower() if key not in ("name", "out") else text
    if key in _GRIDS:
        return key, parse_grid(text, key)
    if key == "two_j":
        return key, parse_two_j(text)
    if key == "thermal_on_raw":
        if text.lower() not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError("thermal_on_raw must be a boolean", field=key)
        return key, text.lower() in ("true", "1", "yes")
    if key in _INTS:
        try:
            return key, int(text)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer, got {text!r}", field=key) from exc
    return key, parse_number(text, key)


def config_from_mapping(mapping: dict, base: Optional[ScenarioConfig] = None) -> ScenarioConfig:
    values = dict(coerce(k, v) for k, v in mapping.items())
    return (base or ScenarioConfig()).replace(**values)


def read_config_text(text: str, source: str = "<string>") -> ScenarioConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if not parser.has_section("scenario"):
        raise ConfigError(f"{source}: missing [scenario] section")
    return config_from_mapping(dict(parser.items("scenario")))


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return read_config_text(text, str(path))


def load_preset(name: str) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}", field="preset")
    text = resources.files("spinbattery").joinpath("presets", f"{name}.ini").read_text()
    return read_config_text(text, f"preset:{name}")
