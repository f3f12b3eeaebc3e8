"""Plain-text run configuration: one `key = value` per line, `#` comments.

Parsing is total: any malformed line, unknown key, bad value or missing
required key raises ConfigError carrying a line number (0 for file-level
problems such as missing keys).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

REQUIRED_KEYS = ("epsilon", "tau", "lambda", "nu", "rho_bar", "n", "t_end")

_DEFAULTS = {
    "dt_policy": "auto",
    "dt": None,
    "c_relax": 1.0,
    "c_transp": 0.5,
    "transport_mode": "spectral",
    "record_every": 10,
    "initial_data": "taylor_green",
    "s": 3.5,
    "s_prime": 2.0,
    "output_dir": ".",
    "snapshot_times": (),
}


@dataclass(frozen=True)
class RunConfig:
    epsilon: float
    tau: float
    lam: float
    nu: float
    rho_bar: float
    n: int
    t_end: float
    dt_policy: str = "auto"
    dt: float | None = None
    c_relax: float = 1.0
    c_transp: float = 0.5
    transport_mode: str = "spectral"
    record_every: int = 10
    initial_data: str = "taylor_green"
    initial_data_path: str | None = None
    s: float = 3.5
    s_prime: float = 2.0
    output_dir: str = "."
    snapshot_times: tuple[float, ...] = field(default_factory=tuple)

    def with_epsilon(self, epsilon: float) -> "RunConfig":
        return dataclasses.replace(self, epsilon=epsilon)


def _parse_float(key, value, line):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"key {key!r} expects a number, got {value!r}", line) from None


def _parse_int(key, value, line):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"key {key!r} expects an integer, got {value!r}", line) from None


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    values: dict[str, object] = {}
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"empty key or value in {raw.strip()!r}", lineno)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        seen[key] = lineno

        if key in ("epsilon", "tau", "lambda", "nu", "rho_bar", "t_end", "dt",
                   "c_relax", "c_transp", "s", "s_prime"):
            values[key] = _parse_float(key, value, lineno)
        elif key in ("n", "record_every"):
            values[key] = _parse_int(key, value, lineno)
        elif key == "dt_policy":
            if value not in ("auto", "fixed"):
                raise ConfigError(f"dt_policy must be auto or fixed, got {value!r}", lineno)
            values[key] = value
        elif key == "transport_mode":
            if value not in ("spectral", "upwind"):
                raise ConfigError(
                    f"transport_mode must be spectral or upwind, got {value!r}", lineno)
            values[key] = value
        elif key == "initial_data":
            if value in ("taylor_green", "zero"):
                values[key] = value
            elif value.startswith("file:"):
                values[key] = "file"
                values["initial_data_path"] = value[len("file:"):].strip()
            elif value.startswith("file(") and value.endswith(")"):
                values[key] = "file"
                values["initial_data_path"] = value[len("file("):-1].strip()
            else:
                raise ConfigError(
                    f"initial_data must be taylor_green, zero or file:PATH, got {value!r}",
                    lineno)
            if values[key] == "file" and not values.get("initial_data_path"):
                raise ConfigError("initial_data file path is empty", lineno)
        elif key == "output_dir":
            values[key] = value
        elif key == "snapshot_times":
            try:
                values[key] = tuple(float(v) for v in value.split(",") if v.strip())
            except ValueError:
                raise ConfigError(
                    f"snapshot_times expects comma-separated numbers, got {value!r}",
                    lineno) from None
        else:
            raise ConfigError(f"unknown key {key!r}", lineno)

    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{source}: missing required keys: {', '.join(missing)}", 0)
    if "dt_policy" not in values and "dt" in values:
        values["dt_policy"] = "fixed"
    if values.get("dt_policy", "auto") == "fixed" and values.get("dt") is None:
        raise ConfigError(f"{source}: dt_policy = fixed requires a dt key", 0)
    if values.get("dt_policy", "auto") == "auto" and values.get("dt") is not None:
        raise ConfigError(f"{source}: dt given but dt_policy = auto", 0)

    merged = dict(_DEFAULTS)
    merged.update(values)
    merged["lam"] = merged.pop("lambda")
    return RunConfig(**merged)


def parse_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}", 0) from None
    return parse_config_text(text, source=str(path))
