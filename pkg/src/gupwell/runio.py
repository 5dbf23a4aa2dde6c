"""Run configuration and deterministic file output.

Configs are flat JSON objects whose keys match RunConfig's fields; unknown
keys are hard errors so typos cannot silently fall back to defaults. Floats
are written with repr (shortest round-trip form), which makes every CSV and
JSON output byte-stable across runs of the same configuration.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .model import ModelParams, TimeUnit

UNIT_TAGS = {"day": TimeUnit.TRADING_DAY, "second": TimeUnit.SECOND}

_OPTIONAL_FLOATS = {"omega_min", "omega_max", "t_horizon", "t_final", "window_a", "window_b"}
_FLOATS = {"m", "beta", "d", "lam", "omega", "sigma_annual", "mean_price", "tick", "limit_fraction"}
_INTS = {"n_basis", "steps", "time_samples", "samples", "density_points", "periods_per_year"}
_BOOLS = {"exact", "percent_reading"}
_STRINGS = {"unit", "out"}
_OPTIONAL_STRINGS = {"series"}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Flat bag of every knob the CLI understands; commands read their slice."""

    m: float = 2800.0
    beta: float = 1e-6
    d: float = 0.2
    lam: float = 0.0
    omega: float = 0.0
    n_basis: int = 64
    unit: str = "day"
    out: str = "."
    exact: bool = False
    omega_min: float | None = None
    omega_max: float | None = None
    steps: int = 201
    t_horizon: float | None = None
    time_samples: int = 512
    t_final: float | None = None
    samples: int = 256
    density_points: int = 0
    window_a: float | None = None
    window_b: float | None = None
    sigma_annual: float = 0.3
    mean_price: float = 10.0
    tick: float = 0.01
    limit_fraction: float = 0.1
    percent_reading: bool = False
    series: str | None = None
    periods_per_year: int = 252

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError(f"config must be a JSON object, got {type(raw).__name__}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values = {}
        for key, value in raw.items():
            values[key] = _coerce(key, value)
        return cls(**values)

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
        return cls.from_dict(raw)

    def merged(self, overrides: dict) -> "RunConfig":
        """New config with the given keys replaced (re-validated)."""
        data = self.to_dict()
        data.update(overrides)
        return RunConfig.from_dict(data)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def model_params(self) -> ModelParams:
        return ModelParams(
            m=self.m,
            beta=self.beta,
            d=self.d,
            lam=self.lam,
            omega=self.omega,
            n_basis=self.n_basis,
            time_unit=UNIT_TAGS[self.unit],
        )


def _coerce(key: str, value):
    if key in _BOOLS:
        if not isinstance(value, bool):
            raise ConfigError(f"config key {key!r} must be true/false, got {value!r}")
        return value
    if key in _STRINGS or key in _OPTIONAL_STRINGS:
        if key in _OPTIONAL_STRINGS and value is None:
            return None
        if not isinstance(value, str):
            raise ConfigError(f"config key {key!r} must be a string, got {value!r}")
        if key == "unit" and value not in UNIT_TAGS:
            raise ConfigError(f"config key 'unit' must be one of {sorted(UNIT_TAGS)}, got {value!r}")
        return value
    if key in _INTS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
        return value
    if key in _FLOATS or key in _OPTIONAL_FLOATS:
        if key in _OPTIONAL_FLOATS and value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
        return float(value)
    raise ConfigError(f"unknown config key {key!r}")


def fmt_value(x) -> str:
    """Shortest exact text form; floats survive a parse round trip."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def write_csv(path, header, rows) -> Path:
    """Plain comma-joined CSV with a fixed column order and \\n endings."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_dipole_csv(path, dipole) -> Path:
    """Dense row-major dump prefixed by a '# dim=.. d=..' metadata line."""
    path = Path(path)
    lines = [f"# dim={dipole.dim} d={float(dipole.d)!r}"]
    for row in dipole.entries:
        lines.append(",".join(repr(float(v)) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def to_builtin(obj):
    """Recursively convert numpy scalars/arrays so json.dumps accepts them."""
    if isinstance(obj, dict):
        return {k: to_builtin(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_builtin(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_builtin(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(to_builtin(payload), indent=2) + "\n")
    return path
