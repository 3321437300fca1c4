"""Run configuration: strict schema, defaults, parsing and serialization.

The configuration is YAML with a closed key set; unknown keys are errors.
Every physical field is validated at load time so scenario runs fail before
any computation starts.  Defaults reproduce the experimental-comparison
setup: a 40 mm, 41-channel array at 185 C pumped in the central channel at
774.9 nm with 0.5 nm bandwidth, grating period fitted to the degenerate
1549.8 nm pair.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np
import yaml

from .errors import ConfigError
from .jsa import ArrayGeometry, Grid, KWindow, PerChannel, PumpSpec
from .material import C_LIGHT, MaterialModel, fit_qpm_period, with_qpm_period

DEFAULT_CONFIG = {
    "material": {
        "sellmeier": None,  # null selects the congruent LiNbO3 e-axis set
        "temperature_c": 185.0,
        "qpm_period_m": None,
        "fit_qpm": {"signal_nm": 1549.8, "idler_nm": 1549.8, "pump_nm": 774.9},
        "coupling_scale": 6.5e-2,
        "damping_m": 4.9e-6,
        "constant_coupling_per_m": None,
        "index_offset": 0.0,
    },
    "geometry": {
        "length_m": 0.04,
        "channel_count": 41,
        "pumped_channels": [[0, 1.0]],
    },
    "pump": {
        "central_wavelength_nm": 774.9,
        "spectral_fwhm_nm": 0.5,
        "k_window": None,  # {center, width, phase_poly: [c0, c1, c2]}
    },
    "grid": {
        "lambda_min_nm": 1300.0,
        "lambda_max_nm": 1800.0,
        "n_omega": 128,
    },
    "filter": None,  # {signal_nm: [lo, hi], idler_nm: [lo, hi]}
    "scenario": None,
    "outputs": {
        "directory": "out",
        "csv": True,
        "image": True,
        "tensor": False,
    },
    "smoothing_nm": None,
    "spread_threshold": 0.05,
}

_SCHEMA = {
    "material": {
        "sellmeier": (list, type(None)),
        "temperature_c": (int, float),
        "qpm_period_m": (int, float, type(None)),
        "fit_qpm": (dict, type(None)),
        "coupling_scale": (int, float),
        "damping_m": (int, float),
        "constant_coupling_per_m": (int, float, type(None)),
        "index_offset": (int, float),
    },
    "geometry": {
        "length_m": (int, float),
        "channel_count": (int,),
        "pumped_channels": (list,),
    },
    "pump": {
        "central_wavelength_nm": (int, float),
        "spectral_fwhm_nm": (int, float),
        "k_window": (dict, type(None)),
    },
    "grid": {
        "lambda_min_nm": (int, float),
        "lambda_max_nm": (int, float),
        "n_omega": (int,),
    },
    "filter": (dict, type(None)),
    "scenario": (str, type(None)),
    "outputs": {
        "directory": (str,),
        "csv": (bool,),
        "image": (bool,),
        "tensor": (bool,),
    },
    "smoothing_nm": (int, float, type(None)),
    "spread_threshold": (int, float),
}

_FIT_QPM_KEYS = {"signal_nm": (int, float), "idler_nm": (int, float), "pump_nm": (int, float)}
_K_WINDOW_KEYS = {"center": (int, float), "width": (int, float), "phase_poly": (list,)}
_FILTER_KEYS = {"signal_nm": (list,), "idler_nm": (list,)}


def _check_keys(data, schema, path):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping")
    for key, value in data.items():
        if key not in schema:
            raise ConfigError(f"unknown key '{path}{key}'")
        expected = schema[key]
        if isinstance(expected, dict):
            if value is None:
                continue
            _check_keys(value, expected, f"{path}{key}.")
        else:
            if not isinstance(value, expected):
                names = "/".join(t.__name__ for t in expected)
                raise ConfigError(
                    f"key '{path}{key}': expected {names}, got {type(value).__name__}"
                )


def _merge(base, override, path=""):
    out = copy.deepcopy(base)
    for key, value in override.items():
        if key not in base:
            raise ConfigError(f"unknown key '{path}{key}'")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, f"{path}{key}.")
        else:
            out[key] = copy.deepcopy(value)
    return out


def _validate_semantics(data):
    mat = data["material"]
    if mat["sellmeier"] is not None and len(mat["sellmeier"]) != 10:
        raise ConfigError("key 'material.sellmeier': needs 10 coefficients")
    if mat["fit_qpm"] is not None:
        _check_keys(mat["fit_qpm"], _FIT_QPM_KEYS, "material.fit_qpm.")
        for name in _FIT_QPM_KEYS:
            if name not in mat["fit_qpm"]:
                raise ConfigError(f"key 'material.fit_qpm.{name}' is required")
    if mat["qpm_period_m"] is None and mat["fit_qpm"] is None:
        raise ConfigError(
            "material needs either 'qpm_period_m' or a 'fit_qpm' block"
        )
    geo = data["geometry"]
    if geo["channel_count"] < 3:
        raise ConfigError("key 'geometry.channel_count': must be at least 3")
    for entry in geo["pumped_channels"]:
        if not isinstance(entry, list) or len(entry) not in (2, 3):
            raise ConfigError(
                "key 'geometry.pumped_channels': entries are "
                "[channel, amplitude] or [channel, re, im]"
            )
    pump = data["pump"]
    if pump["k_window"] is not None:
        _check_keys(pump["k_window"], _K_WINDOW_KEYS, "pump.k_window.")
    if pump["spectral_fwhm_nm"] <= 0:
        raise ConfigError("key 'pump.spectral_fwhm_nm': must be positive")
    grid = data["grid"]
    if grid["lambda_min_nm"] >= grid["lambda_max_nm"]:
        raise ConfigError("key 'grid.lambda_min_nm': must be below lambda_max_nm")
    if grid["n_omega"] < 2:
        raise ConfigError("key 'grid.n_omega': must be at least 2")
    if data["filter"] is not None:
        _check_keys(data["filter"], _FILTER_KEYS, "filter.")
        for name in _FILTER_KEYS:
            band = data["filter"].get(name)
            if band is None or len(band) != 2 or band[0] >= band[1]:
                raise ConfigError(f"key 'filter.{name}': expected [lo_nm, hi_nm]")
    if not (0.0 < data["spread_threshold"] < 1.0):
        raise ConfigError("key 'spread_threshold': must lie in (0, 1)")


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; ``data`` holds the normalized mapping."""

    data: dict

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.data == other.data

    # -- builders -----------------------------------------------------------

    def material_model(self) -> MaterialModel:
        mat = self.data["material"]
        kwargs = dict(
            temperature=float(mat["temperature_c"]),
            coupling_scale=float(mat["coupling_scale"]),
            damping_scale=float(mat["damping_m"]),
            index_offset=float(mat["index_offset"]),
        )
        if mat["sellmeier"] is not None:
            kwargs["sellmeier_coefficients"] = tuple(float(x) for x in mat["sellmeier"])
        if mat["constant_coupling_per_m"] is not None:
            kwargs["constant_coupling"] = float(mat["constant_coupling_per_m"])
        model = MaterialModel(**kwargs)
        if mat["qpm_period_m"] is not None:
            return with_qpm_period(model, float(mat["qpm_period_m"]))
        fit = mat["fit_qpm"]
        period = fit_qpm_period(
            (fit["signal_nm"] * 1e-9, fit["idler_nm"] * 1e-9),
            fit["pump_nm"] * 1e-9,
            model,
        )
        return with_qpm_period(model, period)

    def geometry(self) -> ArrayGeometry:
        geo = self.data["geometry"]
        pumped = tuple(
            (int(e[0]), complex(e[1], e[2]) if len(e) == 3 else complex(e[1]))
            for e in geo["pumped_channels"]
        )
        return ArrayGeometry(
            length=float(geo["length_m"]),
            channel_count=int(geo["channel_count"]),
            temperature=float(self.data["material"]["temperature_c"]),
            pumped_channels=pumped,
        )

    def pump_spec(self, pump_wavelength=None) -> PumpSpec:
        pump = self.data["pump"]
        if pump["k_window"] is not None:
            kw = pump["k_window"]
            poly = kw.get("phase_poly") or [0.0, 0.0, 0.0]
            if len(poly) != 3:
                raise ConfigError("key 'pump.k_window.phase_poly': needs [c0, c1, c2]")
            mode = KWindow(
                center=float(kw.get("center", 0.0)),
                width=float(kw.get("width", np.pi / 2)),
                phase_poly=tuple(float(c) for c in poly),
            )
        else:
            pumped = self.geometry().pumped_channels
            mode = PerChannel(
                channels=tuple(int(c) for c, _ in pumped),
                amplitudes=tuple(a for _, a in pumped),
            )
        lam_p = (
            float(pump["central_wavelength_nm"]) * 1e-9
            if pump_wavelength is None
            else float(pump_wavelength)
        )
        return PumpSpec(
            central_wavelength=lam_p,
            spectral_fwhm=float(pump["spectral_fwhm_nm"]) * 1e-9,
            spatial_mode=mode,
        )

    def grid(self, pump: PumpSpec) -> Grid:
        g = self.data["grid"]
        return Grid.for_pump(
            pump.central_omega,
            float(g["lambda_min_nm"]) * 1e-9,
            float(g["lambda_max_nm"]) * 1e-9,
            int(g["n_omega"]),
            int(self.data["geometry"]["channel_count"]),
        )

    def filter_bounds(self):
        """Filter rectangle as omega bounds, or None."""
        filt = self.data["filter"]
        if filt is None:
            return None
        s_lo, s_hi = (float(x) * 1e-9 for x in filt["signal_nm"])
        i_lo, i_hi = (float(x) * 1e-9 for x in filt["idler_nm"])
        return (
            2.0 * np.pi * C_LIGHT / s_hi,
            2.0 * np.pi * C_LIGHT / s_lo,
            2.0 * np.pi * C_LIGHT / i_hi,
            2.0 * np.pi * C_LIGHT / i_lo,
        )


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a YAML configuration string."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"configuration is not valid YAML: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a mapping")
    _check_keys(raw, _SCHEMA, "")
    data = _merge(DEFAULT_CONFIG, raw)
    _validate_semantics(data)
    cfg = RunConfig(data=data)
    # building the domain objects runs every type invariant now
    model = cfg.material_model()
    cfg.geometry()
    pump = cfg.pump_spec()
    cfg.grid(pump)
    if model.qpm_period_eff is None or model.qpm_period_eff <= 0:
        raise ConfigError("material grating period failed to resolve")
    return cfg


def serialize_config(cfg: RunConfig) -> str:
    return yaml.safe_dump(cfg.data, sort_keys=True, default_flow_style=False)


def apply_overrides(cfg: RunConfig, assignments) -> RunConfig:
    """Apply ``key.path=value`` strings on top of a configuration.

    Values are parsed as YAML scalars; the merged result is re-validated in
    full, so unknown keys or invariant violations fail exactly as they would
    in a configuration file.
    """
    data = copy.deepcopy(cfg.data)
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override '{item}' is not of the form key=value")
        key_path, _, raw_value = item.partition("=")
        try:
            value = yaml.safe_load(raw_value)
        except yaml.YAMLError as exc:
            raise ConfigError(f"override '{item}': bad value ({exc})") from exc
        node = data
        parts = key_path.strip().split(".")
        for part in parts[:-1]:
            if part not in node:
                raise ConfigError(f"unknown key '{key_path}'")
            if not isinstance(node[part], dict):
                node[part] = {}
            node = node[part]
        node[parts[-1]] = value
    return parse_config(yaml.safe_dump(data))
