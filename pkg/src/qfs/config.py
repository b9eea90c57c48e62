"""Strict JSON run configuration.

Frequencies are given in THz or as multiples of the probe centre frequency,
lengths in micrometres, areas in square micrometres, delays in femtoseconds.
Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .gating import BandpassWindow
from .physconst import ExperimentParams, ParameterError, validate_params

__all__ = ["ConfigError", "RunConfig", "DEFAULTS", "build_config", "load_config", "resolve_config",
           "config_hash"]


class ConfigError(ValueError):
    pass


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}
_count = lambda lo: {"type": "integer", "minimum": lo}  # noqa: E731


def _block(props: dict) -> dict:
    return {"type": "object", "additionalProperties": False, "properties": props}


SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["params"],
    "properties": {
        "params": {"type": "object"},
        "grid": _block({"omega_points": _count(16), "omega_span_sigma": _pos}),
        "detection": _block({
            "phi": _num,
            "bandpass": _block({"lo_omega0": _nonneg, "hi_omega0": {"type": ["number", "null"]}}),
            "lo_delay_fs": _num,
        }),
        "vacuum_sweep": _block({"np_min": _pos, "np_max": _pos, "points": _count(2)}),
        "reference": _block({"photons": {"type": "array", "items": _pos, "minItems": 1}}),
        "cat": _block({
            "center_omega0": _pos,
            "width_omega0": _pos,
            "mean_photons": _nonneg,
            "cut_omega0": {"type": ["number", "null"]},
            "probe_photons": _pos,
            "tau_cycles": _pos,
            "tau_points": _count(2),
        }),
        "oracle": _block({
            "modes": _count(1),
            "cutoff": _count(2),
            "tau_points": _count(1),
            "tolerance": _pos,
            "max_dim": _count(1),
            "max_leakage": _pos,
        }),
        "output": _block({"directory": {"type": "string"}, "svg": {"type": "boolean"}}),
    },
}

DEFAULTS = {
    "grid": {"omega_points": 4096, "omega_span_sigma": 10.0},
    "detection": {"phi": -math.pi / 2, "bandpass": {"lo_omega0": 0.0, "hi_omega0": None},
                  "lo_delay_fs": 0.0},
    "vacuum_sweep": {"np_min": 1e8, "np_max": 1e14, "points": 61},
    "reference": {"photons": [1e10]},
    "cat": {"center_omega0": 0.26, "width_omega0": 0.13, "mean_photons": 1.0, "cut_omega0": 2.0,
            "probe_photons": 1e10, "tau_cycles": 10.0, "tau_points": 201},
    "oracle": {"modes": 3, "cutoff": 12, "tau_points": 21, "tolerance": 1e-4, "max_dim": 20000,
               "max_leakage": 1e-6},
    "output": {"directory": None, "svg": False},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def resolve_config(raw: dict) -> dict:
    """Validate ``raw`` against the schema and fill in defaults."""
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    return _merge(DEFAULTS, raw)


def config_hash(resolved: dict) -> str:
    blob = json.dumps(resolved, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class RunConfig:
    params: ExperimentParams
    raw: dict
    digest: str

    def section(self, name: str) -> dict:
        return self.raw[name]

    @property
    def window(self) -> BandpassWindow:
        bp = self.raw["detection"]["bandpass"]
        w0 = self.params.omega0
        hi = bp["hi_omega0"]
        return BandpassWindow(bp["lo_omega0"] * w0, math.inf if hi is None else hi * w0)

    @property
    def phi(self) -> float:
        return float(self.raw["detection"]["phi"])

    @property
    def lo_delay(self) -> float:
        return self.raw["detection"]["lo_delay_fs"] * 1e-15

    @property
    def grid_kw(self) -> dict:
        g = self.raw["grid"]
        return {"omega_points": g["omega_points"], "omega_span": g["omega_span_sigma"]}


def build_config(raw: dict) -> RunConfig:
    resolved = resolve_config(raw)
    try:
        params = validate_params(resolved["params"])
    except ParameterError as exc:
        raise ConfigError(f"params/{exc}") from None
    cfg = RunConfig(params, resolved, config_hash(resolved))
    try:
        cfg.window
    except ValueError as exc:
        raise ConfigError(f"detection/bandpass: {exc}") from None
    sweep = resolved["vacuum_sweep"]
    if sweep["np_min"] >= sweep["np_max"]:
        raise ConfigError("vacuum_sweep: np_min must be below np_max")
    cut = resolved["cat"]["cut_omega0"]
    if cut is not None and cut <= 0:
        raise ConfigError("cat/cut_omega0: must be positive or null")
    return cfg


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    return build_config(raw)
