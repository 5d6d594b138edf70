"""JSON scenario configuration.

An empty document ``{}`` reproduces the default comparison scenario; any
key given overrides the embedded default. See ``docs/config.md``.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..detection import PhotodiodeParams
from ..mzi import Architecture
from ..pipeline import Bench, OperatingPoint
from ..signalgen import GridError, make_time_grid
from ..soa import SOAParams

SCHEMA_VERSION = 1

_SOA_DEFAULT = {"h0": math.log(500.0), "tau_c": 100e-12, "e_sat": 5e-12, "alpha": 5.0}

DEFAULTS: dict = {
    "schema_version": SCHEMA_VERSION,
    "architectures": [a.value for a in Architecture],
    "mi_grid": [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
    "grid": {"f_rep": 10e9, "f_if": 1e9, "n_samples": 32768},
    "pulse": {"fwhm": 1.3e-12, "wavelength_nm": 1550.0},
    "signal": {"wavelength_nm": 1557.4},
    "soa_upper": dict(_SOA_DEFAULT),
    "soa_lower": dict(_SOA_DEFAULT),
    "ports": {
        "switching_pump_dbm": -10.5,
        "port_d_dbm": -10.7,
        "switching_signal_dbm": -15.0,
        "modulation_pulse_dbm": -15.0,
        "modulation_signal_dbm": None,
    },
    "odl": {"delay": None, "step": 1e-12, "margin_db": 30.0},
    "hd2_sweep": {"p_a_dbm": [-20.0, -7.0, 1.0], "p_e_in_dbm": None},
    "static": {"p_a_dbm": [-30.0, 0.0, 0.5]},
    "obpf": {"bandwidth_nm": 0.56},
    "loss_db": 5.6,
    "photodiode": {"responsivity": 1.0, "load": 50.0},
    "spectrum_max_hz": 45e9,
    "workers": 1,
}


class ConfigError(ValueError):
    pass


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        where = f"{path}{key}"
        if key not in base:
            raise ConfigError(f"unknown config key {where!r}")
        if isinstance(base[key], dict) and base[key] and isinstance(val, dict):
            out[key] = _merge(base[key], val, where + ".")
        else:
            out[key] = val
    return out


def _range(spec) -> np.ndarray:
    """``[start, stop, step]`` (inclusive stop) or an explicit list of values."""
    if isinstance(spec, (list, tuple)) and len(spec) == 3 and spec[2] > 0 and spec[1] > spec[0] and (spec[1] - spec[0]) > spec[2]:
        lo, hi, step = map(float, spec)
        n = int(round((hi - lo) / step)) + 1
        return lo + step * np.arange(n)
    return np.asarray(spec, dtype=float)


@dataclass(frozen=True)
class ScenarioConfig:
    data: dict

    @classmethod
    def from_dict(cls, doc: dict | None = None) -> "ScenarioConfig":
        doc = doc or {}
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        version = doc.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
        cfg = cls(_merge(DEFAULTS, doc))
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ScenarioConfig":
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        try:
            doc = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
        return cls.from_dict(doc)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True)

    def with_overrides(self, **top_level) -> "ScenarioConfig":
        return ScenarioConfig.from_dict(_merge(self.data, top_level))

    def validate(self) -> None:
        d = self.data
        try:
            archs = [Architecture(a) for a in d["architectures"]]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if not archs:
            raise ConfigError("architectures must not be empty")
        mis = d["mi_grid"]
        if not mis or any(not (0.0 < float(m) <= 1.0) for m in mis):
            raise ConfigError("mi_grid values must lie in (0, 1]")
        try:
            self.bench()
        except (GridError, ValueError) as exc:
            raise ConfigError(f"invalid physical parameters: {exc}") from exc
        if int(d["workers"]) < 1:
            raise ConfigError("workers must be >= 1")

    # typed views -------------------------------------------------------

    @property
    def architectures(self) -> list[Architecture]:
        return [Architecture(a) for a in self.data["architectures"]]

    @property
    def mi_grid(self) -> list[float]:
        return [float(m) for m in self.data["mi_grid"]]

    @property
    def workers(self) -> int:
        return int(self.data["workers"])

    @property
    def spectrum_max_hz(self) -> float:
        return float(self.data["spectrum_max_hz"])

    def bench(self) -> Bench:
        d = self.data
        g = d["grid"]
        grid = make_time_grid(float(g["f_rep"]), float(g["f_if"]), int(g["n_samples"]))
        return Bench(
            grid=grid,
            soa_upper=SOAParams(**d["soa_upper"]),
            soa_lower=SOAParams(**d["soa_lower"]),
            pulse_fwhm=float(d["pulse"]["fwhm"]),
            pulse_wavelength=float(d["pulse"]["wavelength_nm"]),
            signal_wavelength=float(d["signal"]["wavelength_nm"]),
            obpf_bandwidth=float(d["obpf"]["bandwidth_nm"]),
            loss_db=float(d["loss_db"]),
            photodiode=PhotodiodeParams(**d["photodiode"]),
        )

    def operating_point(self) -> OperatingPoint:
        """Port powers as configured; ``None`` entries still need calibration."""
        p = self.data["ports"]
        pump = float(p["switching_pump_dbm"])
        return OperatingPoint(
            switching_pump_dbm=pump,
            port_d_dbm=pump if p["port_d_dbm"] is None else float(p["port_d_dbm"]),
            switching_signal_dbm=float(p["switching_signal_dbm"]),
            odl_delay=self.data["odl"]["delay"],
            modulation_signal_dbm=p["modulation_signal_dbm"],
            modulation_pulse_dbm=float(p["modulation_pulse_dbm"]),
        )

    def hd2_grid(self) -> np.ndarray:
        return _range(self.data["hd2_sweep"]["p_a_dbm"])

    def static_grid(self) -> np.ndarray:
        return _range(self.data["static"]["p_a_dbm"])
