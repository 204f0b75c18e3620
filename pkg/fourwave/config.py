"""Run configuration: JSON file values overridden by command-line flags."""
from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .fock import MAX_TRUNCATION
from .sector import FourWaveParams, SectorLabel

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
THREADS_ENV = "FWM_THREADS"

DEFAULTS = {
    "c": None,
    "omega": "1,1,1,1",
    "g": 1.0,
    "hbar": 1.0,
    "n": 0,
    "m": 0,
    "t0": 0.0,
    "t1": 10.0,
    "steps": 200,
    "T": 6,
    "format": "csv",
    "output": None,
    "b": None,
    "I0": None,
    "psi": "0",
    "z": None,
    "verbose": False,
}


def _split(value, name: str) -> list:
    if isinstance(value, (list, tuple)):
        return list(value)
    if isinstance(value, str):
        return [part.strip() for part in value.split(",") if part.strip()]
    if isinstance(value, (int, float)):
        return [value]
    raise ConfigError(f"cannot read {name} from {value!r}")


def _ints(value, name: str, count: int) -> tuple[int, ...]:
    parts = _split(value, name)
    if len(parts) != count:
        raise ConfigError(f"{name} needs {count} integers, got {value!r}")
    try:
        numbers = [float(v) for v in parts]
    except ValueError as e:
        raise ConfigError(f"Error reading {name}: {e}") from e
    if any(not x.is_integer() for x in numbers):
        raise ConfigError(f"{name} must be integers, got {value!r}")
    return tuple(int(x) for x in numbers)


def _floats(value, name: str, count: int | None = None) -> tuple[float, ...]:
    parts = _split(value, name)
    if count is not None and len(parts) != count:
        raise ConfigError(f"{name} needs {count} numbers, got {value!r}")
    try:
        numbers = tuple(float(v) for v in parts)
    except ValueError as e:
        raise ConfigError(f"Error reading {name}: {e}") from e
    if not all(math.isfinite(x) for x in numbers):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return numbers


def _complexes(value, name: str) -> tuple[complex, ...]:
    parts = _split(value, name)
    if len(parts) != 4:
        raise ConfigError(f"{name} needs four complex amplitudes, got {value!r}")
    try:
        return tuple(complex(str(v).replace(" ", "")) for v in parts)
    except ValueError as e:
        raise ConfigError(f"Error reading {name}: {e}") from e


def _number(value, name: str, kind=float):
    try:
        number = kind(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Error reading {name}: {e}") from e
    if kind is float and not math.isfinite(number):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return number


@dataclass(frozen=True)
class RunConfig:
    params: FourWaveParams
    c: SectorLabel | None = None
    n: int = 0
    m: int = 0
    t0: float = 0.0
    t1: float = 10.0
    steps: int = 200
    T: int = 6
    format: str = "csv"
    output: str | None = None
    b: tuple[float, float, float] | None = None
    I0: float | None = None
    psi: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    z: tuple[complex, complex, complex, complex] | None = None
    verbose: bool = False

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ConfigError(f"t1={self.t1} must exceed t0={self.t0}")
        if self.steps < 1:
            raise ConfigError(f"steps must be at least 1, got {self.steps}")
        if not 0 <= self.T <= MAX_TRUNCATION:
            raise ConfigError(f"T must lie in 0..{MAX_TRUNCATION}, got {self.T}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")

    @classmethod
    def from_mapping(cls, values: dict) -> "RunConfig":
        unknown = set(values) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        merged = {**DEFAULTS, **{k: v for k, v in values.items() if v is not None}}

        omegas = _floats(merged["omega"], "omega", 4)
        params = FourWaveParams(*omegas, g=_number(merged["g"], "g"),
                                hbar=_number(merged["hbar"], "hbar"))
        psi = _floats(merged["psi"], "psi")
        if not 1 <= len(psi) <= 4:
            raise ConfigError(f"psi takes one to four angles, got {merged['psi']!r}")

        return cls(
            params=params,
            c=SectorLabel.from_tuple(_ints(merged["c"], "c", 3)) if merged["c"] is not None else None,
            n=_number(merged["n"], "n", int),
            m=_number(merged["m"], "m", int),
            t0=_number(merged["t0"], "t0"),
            t1=_number(merged["t1"], "t1"),
            steps=_number(merged["steps"], "steps", int),
            T=_number(merged["T"], "T", int),
            format=str(merged["format"]),
            output=merged["output"],
            b=_floats(merged["b"], "b", 3) if merged["b"] is not None else None,
            I0=_number(merged["I0"], "I0") if merged["I0"] is not None else None,
            psi=psi + (0.0,) * (4 - len(psi)),
            z=_complexes(merged["z"], "z") if merged["z"] is not None else None,
            verbose=bool(merged["verbose"]),
        )

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.steps + 1)

    def require(self, *names: str):
        """Raise ConfigError unless every named field is set"""
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            raise ConfigError(f"missing required setting(s): {', '.join('--' + m for m in missing)}")


def load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            values = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Error reading config file {path}: {e}") from e
    if not isinstance(values, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    logger.debug("loaded %d settings from %s", len(values), path)
    return values


def build_config(flags: dict, config_path: str | None = None) -> RunConfig:
    """Defaults, then the config file, then every flag given on the command line"""
    values = load_config_file(config_path) if config_path else {}
    values.update({k: v for k, v in flags.items() if v is not None})
    return RunConfig.from_mapping(values)


def worker_count() -> int:
    """Thread pool size, capped by FWM_THREADS when set"""
    available = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return available
    try:
        cap = int(raw)
    except ValueError as e:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e
    if cap < 1:
        raise ConfigError(f"{THREADS_ENV} must be at least 1, got {cap}")
    return min(cap, available)
