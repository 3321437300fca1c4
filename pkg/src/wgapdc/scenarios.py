"""Named simulation scenarios reproducing the study's figure configurations.

Each scenario assembles one or more pipeline runs from the Table-style
parameter blocks, writes CSV grids (the artifacts of record), optional
false-color images and tensors, and finishes with a manifest of every file
hash so repeated runs can be diffed byte for byte.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import yaml
from scipy.optimize import brentq

from . import tensorio
from .config import RunConfig, apply_overrides, parse_config
from .correlations import (
    branch_analysis,
    channel_labels,
    spatial_marginal,
    spectral_marginal,
)
from .errors import ConfigError
from .jsa import delta_beta_array  # noqa: F401  (re-exported for contour checks)
from .material import C_LIGHT, delta_beta_omega
from .output import write_csv_map, write_csv_table, write_manifest, write_ppm_map
from .pipeline import run_point

SCENARIO_NAMES = (
    "fig2_contours",
    "fig3_pump_shaping",
    "fig4_phase_engineering",
    "fig5_filtered",
    "fig7_experiment",
    "fig8_marginals",
    "fig9_pm_curve",
    "fig10_near_degenerate",
    "custom",
)

FIG7_PUMPS_NM = (774.9, 774.5, 774.2, 773.9)
FIG8_BANDS_NM = ((1550.0, 1750.0), (1350.0, 1550.0))
FIG9_SWEEP_NM = tuple(round(773.9 + 0.1 * i, 1) for i in range(11))

# near-degenerate block: constant coupling, 51 channels, 1550.1 nm pair
NEAR_DEGENERATE_OVERRIDES = {
    "material": {
        "fit_qpm": {"signal_nm": 1550.1, "idler_nm": 1550.1, "pump_nm": 775.05},
        "constant_coupling_per_m": 400.0,
    },
    "geometry": {"channel_count": 51},
    "pump": {"central_wavelength_nm": 775.05},
    "grid": {"lambda_min_nm": 1540.0, "lambda_max_nm": 1560.0, "n_omega": 101},
}

# phase-engineering block: 49 channels, stronger coupling, 1550.0 nm pair
PHASE_ENGINEERING_OVERRIDES = {
    "material": {
        "fit_qpm": {"signal_nm": 1550.0, "idler_nm": 1550.0, "pump_nm": 775.0},
        "coupling_scale": 13e-2,
    },
    "geometry": {"channel_count": 49},
    "pump": {"central_wavelength_nm": 775.0},
    "grid": {"lambda_min_nm": 1548.0, "lambda_max_nm": 1552.0, "n_omega": 81},
    "filter": {"signal_nm": [1549.9, 1550.1], "idler_nm": [1549.9, 1550.1]},
}

# non-degenerate correlation block: 1400/1600 nm pair, stronger coupling
FILTERED_OVERRIDES = {
    "material": {
        "fit_qpm": {
            "signal_nm": 1400.0,
            "idler_nm": 1600.0,
            "pump_nm": 1.0 / (1.0 / 1400.0 + 1.0 / 1600.0),
        },
        "coupling_scale": 13e-2,
    },
    "pump": {"central_wavelength_nm": 1.0 / (1.0 / 1400.0 + 1.0 / 1600.0)},
    "grid": {"lambda_min_nm": 1340.0, "lambda_max_nm": 1670.0, "n_omega": 128},
}


def _with_overrides(base: RunConfig, mapping) -> RunConfig:
    merged = yaml.safe_load(yaml.safe_dump(base.data))

    def merge(dst, src):
        for key, value in src.items():
            if isinstance(value, dict) and isinstance(dst.get(key), dict):
                merge(dst[key], value)
            else:
                dst[key] = value

    merge(merged, mapping)
    return parse_config(yaml.safe_dump(merged))


def pump_for_center_mismatch(cfg: RunConfig, target: float) -> float:
    """Pump wavelength whose degenerate spectral mismatch equals ``target``.

    Solves delta_beta_omega(omega_p/2, omega_p/2) = target by root finding
    around the configured pump; used to place the contour scenarios at
    0 and +-2 C0.
    """
    model = cfg.material_model()
    lam0 = cfg.pump_spec().central_wavelength

    def residual(lam_p):
        omega_p = 2.0 * np.pi * C_LIGHT / lam_p
        return delta_beta_omega(omega_p / 2.0, omega_p / 2.0, model) - target

    lo, hi = lam0 - 3e-9, lam0 + 3e-9
    if residual(lo) * residual(hi) > 0:
        raise ConfigError(
            f"no pump wavelength within 3 nm reaches mismatch {target} 1/m"
        )
    return float(brentq(residual, lo, hi, xtol=1e-18, rtol=1e-15))


class _Writer:
    """Collects artifact paths and honours the configured format flags."""

    def __init__(self, out_dir: Path, cfg: RunConfig):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.csv = bool(cfg.data["outputs"]["csv"])
        self.image = bool(cfg.data["outputs"]["image"])
        self.tensor = bool(cfg.data["outputs"]["tensor"])
        self.paths = []

    def map(self, name, values, row_axis, col_axis, row_label, col_label, comments=()):
        if self.csv:
            self.paths.append(
                write_csv_map(
                    self.out_dir / f"{name}.csv",
                    values,
                    row_axis,
                    col_axis,
                    row_label,
                    col_label,
                    comments,
                )
            )
        if self.image:
            self.paths.extend(
                write_ppm_map(
                    self.out_dir / f"{name}.ppm",
                    values,
                    row_axis,
                    col_axis,
                    row_label,
                    col_label,
                )
            )

    def table(self, name, columns, header, comments=()):
        if self.csv:
            self.paths.append(
                write_csv_table(self.out_dir / f"{name}.csv", columns, header, comments)
            )

    def state(self, name, jsa):
        if self.tensor:
            path = self.out_dir / f"{name}.tensor"
            tensorio.save_tensor(jsa, path)
            self.paths.append(path)


def _emit_point(writer: _Writer, tag: str, result, cfg: RunConfig) -> None:
    grid = result.jsa.grid
    k = grid.k_axis
    channels = channel_labels(k.size)
    writer.map(
        f"{tag}_gamma_k",
        result.maps.gamma_k,
        k,
        k,
        "k_signal_rad",
        "k_idler_rad",
        comments=["momentum-pair coincidence mass"],
    )
    writer.map(
        f"{tag}_gamma_n",
        result.maps.gamma_n,
        channels,
        channels,
        "channel_signal",
        "channel_idler",
        comments=["channel-pair coincidence mass"],
    )
    writer.map(
        f"{tag}_phase_k",
        result.maps.phase_k,
        k,
        k,
        "k_signal_rad",
        "k_idler_rad",
        comments=["phase of the dominant-frequency momentum amplitude [rad]"],
    )
    sm = result.spatio_spectral
    writer.map(
        f"{tag}_spatio_spectral",
        sm.intensity,
        sm.channel_axis,
        sm.wavelength_axis,
        "channel",
        "wavelength_m",
        comments=["single-photon intensity per channel and wavelength bin"],
    )
    writer.table(
        f"{tag}_central_marginal",
        [sm.wavelength_axis, spectral_marginal(sm, 0)],
        ["wavelength_m", "intensity"],
        comments=["central-channel spectral marginal"],
    )
    if result.smoothed is not None:
        sms = result.smoothed
        writer.map(
            f"{tag}_spatio_spectral_smoothed",
            sms.intensity,
            sms.channel_axis,
            sms.wavelength_axis,
            "channel",
            "wavelength_m",
            comments=[
                "single-photon intensity with "
                f"{cfg.data['smoothing_nm']} nm detector resolution"
            ],
        )
        writer.table(
            f"{tag}_central_marginal_smoothed",
            [sms.wavelength_axis, spectral_marginal(sms, 0)],
            ["wavelength_m", "intensity"],
        )
    writer.state(f"{tag}_state", result.jsa)


def contour_local_maxima(gamma_k_map, floor_fraction: float = 0.25):
    """Strict 8-neighbour local maxima above a floor, as index pairs."""
    g = np.asarray(gamma_k_map)
    floor = floor_fraction * g.max()
    maxima = []
    for a in range(g.shape[0]):
        for b in range(g.shape[1]):
            v = g[a, b]
            if v <= floor:
                continue
            neigh = g[max(a - 1, 0) : a + 2, max(b - 1, 0) : b + 2]
            if v >= neigh.max() and (neigh < v).sum() >= neigh.size - 1:
                maxima.append((a, b))
    return maxima


# --- scenario bodies -------------------------------------------------------


def _scenario_custom(cfg, writer):
    result = run_point(cfg)
    _emit_point(writer, "custom", result, cfg)
    return [result]


def _scenario_fig7(cfg, writer):
    rows = []
    for lam_nm in FIG7_PUMPS_NM:
        result = run_point(cfg, pump_wavelength=lam_nm * 1e-9)
        _emit_point(writer, f"pump_{lam_nm:.1f}nm", result, cfg)
        rows.append(branch_analysis(result.spatio_spectral, lam_nm * 1e-9))
    writer.table(
        "branch_summary",
        [
            [b.pump_wavelength * 1e9 for b in rows],
            [b.signal_peak * 1e9 for b in rows],
            [b.idler_peak * 1e9 for b in rows],
            [b.signal_fwhm * 1e9 for b in rows],
            [b.idler_fwhm * 1e9 for b in rows],
            [int(b.degenerate) for b in rows],
        ],
        [
            "pump_nm",
            "signal_peak_nm",
            "idler_peak_nm",
            "signal_fwhm_nm",
            "idler_fwhm_nm",
            "degenerate",
        ],
    )
    return rows


def _scenario_fig8(cfg, writer):
    result = run_point(cfg, pump_wavelength=773.9e-9)
    _emit_point(writer, "pump_773.9nm", result, cfg)
    sm = result.spatio_spectral
    columns = [channel_labels(sm.channel_axis.size)]
    header = ["channel"]
    for lo, hi in FIG8_BANDS_NM:
        columns.append(spatial_marginal(sm, (lo * 1e-9, hi * 1e-9)))
        header.append(f"band_{lo:.0f}_{hi:.0f}nm")
    writer.table(
        "spatial_marginals",
        columns,
        header,
        comments=["central channel normalized to unity in each band"],
    )
    return [result]


def _scenario_fig9(cfg, writer):
    points = []
    for lam_nm in FIG9_SWEEP_NM:
        result = run_point(cfg, pump_wavelength=lam_nm * 1e-9)
        points.append(branch_analysis(result.spatio_spectral, lam_nm * 1e-9))
    separation = [
        0.0 if b.degenerate else (b.idler_peak - b.signal_peak) * 1e9 for b in points
    ]
    conservation = [
        abs((1.0 / b.signal_peak + 1.0 / b.idler_peak) * b.pump_wavelength - 1.0)
        if not (math.isnan(b.signal_peak) or math.isnan(b.idler_peak))
        else math.nan
        for b in points
    ]
    writer.table(
        "phase_matching_curve",
        [
            [b.pump_wavelength * 1e9 for b in points],
            [b.signal_peak * 1e9 for b in points],
            [b.idler_peak * 1e9 for b in points],
            [b.signal_fwhm * 1e9 for b in points],
            [b.idler_fwhm * 1e9 for b in points],
            [int(b.degenerate) for b in points],
            separation,
            conservation,
        ],
        [
            "pump_nm",
            "signal_peak_nm",
            "idler_peak_nm",
            "signal_fwhm_nm",
            "idler_fwhm_nm",
            "degenerate",
            "separation_nm",
            "conservation_residual",
        ],
    )
    return points


def _near_degenerate_targets(cfg):
    c0 = cfg.data["material"]["constant_coupling_per_m"]
    return (
        ("center", 0.0),
        ("circle", +2.0 * c0),
        ("corner", -2.0 * c0),
    )


def _scenario_fig10(cfg, writer):
    base = _with_overrides(cfg, NEAR_DEGENERATE_OVERRIDES)
    results = []
    for tag, target in _near_degenerate_targets(base):
        lam_p = pump_for_center_mismatch(base, target)
        result = run_point(base, pump_wavelength=lam_p)
        _emit_point(writer, f"detune_{tag}", result, base)
        results.append((tag, target, lam_p, result))
    return results


def _scenario_fig2(cfg, writer):
    base = _with_overrides(cfg, NEAR_DEGENERATE_OVERRIDES)
    results = []
    for tag, target in _near_degenerate_targets(base):
        lam_p = pump_for_center_mismatch(base, target)
        lam_deg_nm = lam_p * 1e9  # degeneracy wavelength is 2 lam_p
        filt = {
            "signal_nm": [2 * lam_deg_nm - 0.1, 2 * lam_deg_nm + 0.1],
            "idler_nm": [2 * lam_deg_nm - 0.1, 2 * lam_deg_nm + 0.1],
        }
        point_cfg = _with_overrides(base, {"filter": filt})
        result = run_point(point_cfg, pump_wavelength=lam_p)
        _emit_point(writer, f"contour_{tag}", result, point_cfg)

        k = result.jsa.grid.k_axis
        c0 = base.data["material"]["constant_coupling_per_m"]
        maxima = contour_local_maxima(result.maps.gamma_k)
        rows = [
            (
                k[a],
                k[b],
                math.cos(k[a]) + math.cos(k[b]),
                target / (2.0 * c0),
            )
            for a, b in maxima
        ]
        writer.table(
            f"contour_{tag}_maxima",
            list(zip(*rows)) if rows else [[], [], [], []],
            ["k_signal_rad", "k_idler_rad", "cos_sum", "cos_sum_target"],
            comments=[
                "local maxima of the filtered momentum correlation;",
                "cos(ks) + cos(ki) should equal the target on the contour",
            ],
        )
        results.append((tag, target, lam_p, result))
    return results


def _scenario_fig3(cfg, writer):
    base = _with_overrides(cfg, NEAR_DEGENERATE_OVERRIDES)
    lam_p = pump_for_center_mismatch(base, 0.0)
    variants = [
        ("flat", None),
        ("window_center", {"center": 0.0, "width": math.pi / 2, "phase_poly": [0.0, 0.0, 0.0]}),
        ("window_plus", {"center": math.pi / 2, "width": math.pi / 2, "phase_poly": [0.0, 0.0, 0.0]}),
        ("window_minus", {"center": -math.pi / 2, "width": math.pi / 2, "phase_poly": [0.0, 0.0, 0.0]}),
    ]
    results = []
    for tag, window in variants:
        point_cfg = _with_overrides(base, {"pump": {"k_window": window}})
        result = run_point(point_cfg, pump_wavelength=lam_p)
        _emit_point(writer, f"pump_{tag}", result, point_cfg)
        results.append((tag, result))
    return results


def _scenario_fig4(cfg, writer):
    base = _with_overrides(cfg, PHASE_ENGINEERING_OVERRIDES)
    variants = [
        ("zero_phase", [0.0, 0.0, 0.0]),
        ("linear_phase", [0.0, 3.0, 0.0]),
        ("quadratic_phase", [0.0, 0.0, 4.0]),
    ]
    results = []
    for tag, poly in variants:
        window = {"center": 0.0, "width": math.pi / 2, "phase_poly": poly}
        point_cfg = _with_overrides(base, {"pump": {"k_window": window}})
        result = run_point(point_cfg)
        _emit_point(writer, tag, result, point_cfg)
        results.append((tag, result))
    return results


def _scenario_fig5(cfg, writer):
    base = _with_overrides(cfg, FILTERED_OVERRIDES)
    lam_p_nm = base.data["pump"]["central_wavelength_nm"]
    results = []
    for lam_s_nm in (1380.0, 1400.0, 1420.0):
        lam_i_nm = 1.0 / (1.0 / lam_p_nm - 1.0 / lam_s_nm)
        filt = {
            "signal_nm": [lam_s_nm - 12.0, lam_s_nm + 12.0],
            "idler_nm": [lam_i_nm - 12.0, lam_i_nm + 12.0],
        }
        point_cfg = _with_overrides(base, {"filter": filt})
        result = run_point(point_cfg)
        _emit_point(writer, f"filter_{lam_s_nm:.0f}nm", result, point_cfg)
        results.append((lam_s_nm, lam_i_nm, result))
    return results


_SCENARIOS = {
    "fig2_contours": _scenario_fig2,
    "fig3_pump_shaping": _scenario_fig3,
    "fig4_phase_engineering": _scenario_fig4,
    "fig5_filtered": _scenario_fig5,
    "fig7_experiment": _scenario_fig7,
    "fig8_marginals": _scenario_fig8,
    "fig9_pm_curve": _scenario_fig9,
    "fig10_near_degenerate": _scenario_fig10,
    "custom": _scenario_custom,
}


def run_scenario(name: str, overrides=None, out_dir=None, base_config=None):
    """Execute a named scenario and write its artifacts plus a manifest.

    ``overrides`` is a list of ``key.path=value`` strings applied to the
    scenario's base configuration.  Returns the manifest path.
    """
    if name not in _SCENARIOS:
        raise KeyError(name)
    cfg = base_config if base_config is not None else parse_config("")
    if overrides:
        cfg = apply_overrides(cfg, overrides)
    out = Path(out_dir) if out_dir is not None else Path(cfg.data["outputs"]["directory"])
    writer = _Writer(out, cfg)
    _SCENARIOS[name](cfg, writer)
    return write_manifest(out, writer.paths)
