"""End-to-end state construction shared by scenarios and curve extraction."""

from __future__ import annotations

from dataclasses import dataclass

from .config import RunConfig
from .correlations import (
    CorrelationMaps,
    SpatioSpectralMap,
    correlation_maps,
    smooth_spectral,
    spatio_spectral_intensity,
)
from .jsa import JsaTensor, apply_spectral_filter, build_jsa, normalize


@dataclass(frozen=True)
class PointResult:
    """All derived quantities of one pump/configuration point."""

    pump_wavelength: float
    jsa: JsaTensor
    maps: CorrelationMaps
    spatio_spectral: SpatioSpectralMap
    smoothed: SpatioSpectralMap | None


def build_state(cfg: RunConfig, pump_wavelength=None) -> JsaTensor:
    """Assemble, filter and normalize the pair state of one configuration."""
    model = cfg.material_model()
    geometry = cfg.geometry()
    pump = cfg.pump_spec(pump_wavelength)
    grid = cfg.grid(pump)
    state = build_jsa(grid, geometry, pump, model)
    bounds = cfg.filter_bounds()
    if bounds is not None:
        return apply_spectral_filter(state, bounds)
    return normalize(state)


def run_point(cfg: RunConfig, pump_wavelength=None) -> PointResult:
    state = build_state(cfg, pump_wavelength)
    intensity = spatio_spectral_intensity(state)
    smoothing = cfg.data["smoothing_nm"]
    smoothed = (
        smooth_spectral(intensity, float(smoothing) * 1e-9)
        if smoothing
        else None
    )
    pump = cfg.pump_spec(pump_wavelength)
    return PointResult(
        pump_wavelength=pump.central_wavelength,
        jsa=state,
        maps=correlation_maps(state),
        spatio_spectral=intensity,
        smoothed=smoothed,
    )
