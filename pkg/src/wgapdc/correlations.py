"""Correlation maps and marginals derived from the pair amplitude tensor.

Momentum-space and channel-space coincidence maps, the channel-resolved
single-photon spectrum, spectral/spatial marginals, detector smoothing and
the phase-matching curve extraction.  Channel-space quantities use the
unitary discrete Fourier transform between the momentum axis and centered
channel labels, so total probability is conserved by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, EmptyStateError
from .jsa import Grid, JsaTensor, require_normalized
from .material import C_LIGHT


def unitary_k_to_channel(arr):
    """Unitary transform from the momentum axis to centered channel labels.

    Acts on the last two axes: out[..., ns, ni] =
    (1/N) sum_{a,b} arr[..., a, b] exp(i k_a ns + i k_b ni).
    """
    arr = np.asarray(arr, dtype=complex)
    n = arr.shape[-1]
    half = (n - 1) // 2
    out = n * np.fft.ifft2(arr, axes=(-2, -1))
    out = np.fft.fftshift(out, axes=(-2, -1))
    labels = np.arange(-half, half + 1)
    signs = np.where(labels % 2 == 0, 1.0, -1.0)
    return out * np.multiply.outer(signs, signs)


def channel_labels(channel_count: int):
    half = (channel_count - 1) // 2
    return np.arange(-half, half + 1)


@dataclass(frozen=True)
class CorrelationMaps:
    """Coincidence probability maps in momentum and channel space."""

    gamma_k: np.ndarray  # (Nk, Nk), mass per momentum-pair cell
    gamma_n: np.ndarray  # (Nn, Nn), mass per channel pair
    phase_k: np.ndarray  # phase of the dominant-frequency momentum amplitude
    grid: Grid
    channel_axis: np.ndarray


@dataclass(frozen=True)
class SpatioSpectralMap:
    """Single-photon intensity per channel and wavelength bin."""

    intensity: np.ndarray  # (channels, wavelengths)
    wavelength_axis: np.ndarray  # m, strictly increasing
    channel_axis: np.ndarray

    def __post_init__(self):
        if np.any(self.intensity < 0):
            raise ConfigError("intensity map must be non-negative")
        if np.any(np.diff(self.wavelength_axis) <= 0):
            raise ConfigError("wavelength axis must be strictly increasing")


def gamma_k_omega(jsa: JsaTensor, coincidence_boost: bool = True):
    """Pointwise coincidence density |f|^2 with the coincident-mode factor.

    The factor 4 applies exactly where both the frequency indices and the
    momentum indices coincide; everywhere else the density is |f|^2.
    """
    require_normalized(jsa, "gamma_k_omega")
    out = np.abs(jsa.values) ** 2
    if coincidence_boost:
        n_pairs = min(out.shape[0], out.shape[1])
        n_k = out.shape[2]
        idx = np.arange(n_pairs)
        kdx = np.arange(n_k)
        out[idx[:, None], idx[:, None], kdx[None, :], kdx[None, :]] *= 4.0
    return out


def gamma_k(jsa: JsaTensor, coincidence_boost: bool = True):
    """Momentum-pair coincidence mass, frequency degrees traced out."""
    require_normalized(jsa, "gamma_k")
    values = jsa.values
    n_ws, n_wi, n_k, _ = values.shape
    total = np.zeros((n_k, n_k))
    diag_excess = np.zeros(n_k)
    for i in range(n_ws):
        mag = np.abs(values[i]) ** 2
        total += mag.sum(axis=0)
        if coincidence_boost and i < n_wi:
            diag_excess += 3.0 * np.diagonal(mag[i])
    if coincidence_boost:
        total[np.arange(n_k), np.arange(n_k)] += diag_excess
    return total * jsa.grid.cell_measure


def gamma_n(jsa: JsaTensor, coincidence_boost: bool = True):
    """Channel-pair coincidence mass via the unitary momentum transform."""
    require_normalized(jsa, "gamma_n")
    values = jsa.values
    n_ws, n_wi, n_k, _ = values.shape
    total = np.zeros((n_k, n_k))
    diag_excess = np.zeros(n_k)
    for i in range(n_ws):
        mag = np.abs(unitary_k_to_channel(values[i])) ** 2
        total += mag.sum(axis=0)
        if coincidence_boost and i < n_wi:
            diag_excess += 3.0 * np.diagonal(mag[i])
    if coincidence_boost:
        total[np.arange(n_k), np.arange(n_k)] += diag_excess
    return total * jsa.grid.cell_measure


def _dominant_frequency_pair(values):
    mass = np.sum(np.abs(values) ** 2, axis=(2, 3))
    return np.unravel_index(int(np.argmax(mass)), mass.shape)


def correlation_maps(jsa: JsaTensor) -> CorrelationMaps:
    """Bundle the momentum and channel coincidence maps of one state."""
    require_normalized(jsa, "correlation_maps")
    i0, j0 = _dominant_frequency_pair(jsa.values)
    return CorrelationMaps(
        gamma_k=gamma_k(jsa),
        gamma_n=gamma_n(jsa),
        phase_k=np.angle(jsa.values[i0, j0]),
        grid=jsa.grid,
        channel_axis=channel_labels(jsa.grid.k_axis.size),
    )


def spatio_spectral_intensity(jsa: JsaTensor) -> SpatioSpectralMap:
    """Channel-resolved single-photon spectrum with both photons counted.

    Each photon's momentum is transformed to channel space and the partner
    photon is traced out in channel and frequency; the signal and idler
    contributions are added since the photons are indistinguishable in
    type-I detection.  Wavelength bins relabel the frequency bins through
    lambda = 2 pi c / omega.
    """
    require_normalized(jsa, "spatio_spectral_intensity")
    grid = jsa.grid
    if grid.omega_s_axis.size != grid.omega_i_axis.size or not np.allclose(
        grid.omega_s_axis, grid.omega_i_axis, rtol=1e-12, atol=0.0
    ):
        raise ConfigError(
            "spatio_spectral_intensity expects shared signal/idler axes"
        )
    values = jsa.values
    n_w, _, n_k, _ = values.shape
    s_signal = np.zeros((n_w, n_k))
    s_idler = np.zeros((n_w, n_k))
    for i in range(n_w):
        mag = np.abs(unitary_k_to_channel(values[i])) ** 2
        s_signal[i] = mag.sum(axis=(0, 2))
        s_idler += mag.sum(axis=1)
    intensity = (s_signal + s_idler) * grid.cell_measure
    wavelengths = 2.0 * np.pi * C_LIGHT / grid.omega_s_axis
    order = np.argsort(wavelengths)
    return SpatioSpectralMap(
        intensity=intensity[order].T.copy(),
        wavelength_axis=wavelengths[order],
        channel_axis=channel_labels(n_k),
    )


def _channel_row(m: SpatioSpectralMap, channel: int) -> int:
    rows = np.nonzero(m.channel_axis == channel)[0]
    if rows.size == 0:
        raise DomainError(f"channel {channel} not present in the map")
    return int(rows[0])


def spectral_marginal(m: SpatioSpectralMap, channel: int):
    """Wavelength distribution of one waveguide channel."""
    return m.intensity[_channel_row(m, channel)].copy()


def spatial_marginal(m: SpatioSpectralMap, band):
    """Channel distribution integrated over a wavelength band.

    The central channel is normalized to unity, following the convention of
    the measured marginals.
    """
    lam_min, lam_max = band
    cols = (m.wavelength_axis >= lam_min) & (m.wavelength_axis <= lam_max)
    if not cols.any():
        raise EmptyStateError("wavelength band does not overlap the map")
    marginal = m.intensity[:, cols].sum(axis=1)
    central = marginal[_channel_row(m, 0)]
    if central <= 0:
        raise EmptyStateError("central channel carries no intensity in the band")
    return marginal / central


def smooth_spectral(m: SpatioSpectralMap, resolution_fwhm: float) -> SpatioSpectralMap:
    """Convolve along wavelength with a mass-preserving Gaussian kernel."""
    if resolution_fwhm <= 0:
        raise DomainError("resolution FWHM must be positive")
    lam = m.wavelength_axis
    sigma = resolution_fwhm / (2.0 * np.sqrt(2.0 * np.log(2.0)))
    diff = lam[:, None] - lam[None, :]
    kern = np.exp(-(diff * diff) / (2.0 * sigma * sigma))
    kern /= kern.sum(axis=0, keepdims=True)
    return SpatioSpectralMap(
        intensity=m.intensity @ kern.T,
        wavelength_axis=lam,
        channel_axis=m.channel_axis,
    )


@dataclass(frozen=True)
class BranchPoint:
    """Peak wavelengths and widths of the two spectral branches at one pump."""

    pump_wavelength: float
    signal_peak: float  # m, short-wavelength branch (nan if missing)
    idler_peak: float  # m, long-wavelength branch (nan if missing)
    signal_fwhm: float
    idler_fwhm: float
    degenerate: bool


def _parabolic_peak(x, y, idx):
    """Vertex of the parabola through the sample ``idx`` and its neighbours."""
    if idx <= 0 or idx >= len(x) - 1:
        return float(x[idx]), float(y[idx])
    coeffs = np.polyfit(x[idx - 1 : idx + 2], y[idx - 1 : idx + 2], 2)
    a, b, c = coeffs
    if a >= 0:
        return float(x[idx]), float(y[idx])
    xv = -b / (2.0 * a)
    return float(xv), float(np.polyval(coeffs, xv))


def _fwhm(x, y, idx, peak_value):
    """Full width at half maximum around sample ``idx`` by linear crossing."""
    half = 0.5 * peak_value
    lo = x[0]
    for p in range(idx, 0, -1):
        if y[p - 1] < half <= y[p]:
            t = (half - y[p - 1]) / (y[p] - y[p - 1])
            lo = x[p - 1] + t * (x[p] - x[p - 1])
            break
    hi = x[-1]
    for p in range(idx, len(x) - 1):
        if y[p + 1] < half <= y[p]:
            t = (y[p] - half) / (y[p] - y[p + 1])
            hi = x[p] + t * (x[p + 1] - x[p])
            break
    return float(hi - lo)


def branch_analysis(m: SpatioSpectralMap, pump_wavelength: float, channel: int = 0) -> BranchPoint:
    """Locate the spectral branch peaks of one channel's marginal.

    The marginal is split at the degeneracy wavelength 2 lambda_p; each
    side's peak is refined by parabolic interpolation of the top three
    samples.  The state counts as degenerate when the marginal does not dip
    below half of the weaker side peak between the two candidates; the
    merged branch then reports the marginal centroid, which coincides with
    the phase-matched wavelength of a symmetric state.
    """
    lam = m.wavelength_axis
    y = spectral_marginal(m, channel)
    lam_deg = 2.0 * pump_wavelength
    floor = 1e-12 * y.max() if y.max() > 0 else 0.0

    lower = np.nonzero(lam <= lam_deg)[0]
    upper = np.nonzero(lam > lam_deg)[0]

    def side_peak(side):
        if side.size == 0 or y[side].max() <= floor:
            return None
        rel = int(np.argmax(y[side]))
        idx = int(side[rel])
        peak_x, peak_y = _parabolic_peak(lam, y, idx)
        return idx, peak_x, peak_y

    low = side_peak(lower)
    up = side_peak(upper)

    if low is not None and up is not None:
        between = y[low[0] : up[0] + 1]
        valley = between.min() if between.size else 0.0
        merged = valley >= 0.5 * min(low[2], up[2])
        if merged:
            # symmetric pairing in frequency puts the centroid exactly on
            # the degeneracy line; report it instead of either hump
            omega = 2.0 * np.pi * C_LIGHT / lam
            centroid = float(np.sum(omega * y) / np.sum(y))
            peak_x = 2.0 * np.pi * C_LIGHT / centroid
            idx = int(np.argmax(y))
            width = _fwhm(lam, y, idx, float(y[idx]))
            return BranchPoint(
                pump_wavelength, peak_x, peak_x, width, width, degenerate=True
            )
        s_width = _fwhm(lam[lower], y[lower], int(np.argmax(y[lower])), low[2])
        i_width = _fwhm(lam[upper], y[upper], int(np.argmax(y[upper])), up[2])
        return BranchPoint(
            pump_wavelength, low[1], up[1], s_width, i_width, degenerate=False
        )

    if low is None and up is None:
        raise EmptyStateError("marginal carries no intensity on either branch")
    present = low if low is not None else up
    side = lower if low is not None else upper
    width = _fwhm(lam[side], y[side], int(np.argmax(y[side])), present[2])
    if low is not None:
        return BranchPoint(pump_wavelength, present[1], math.nan, width, math.nan, False)
    return BranchPoint(pump_wavelength, math.nan, present[1], math.nan, width, False)


def phase_matching_curve(pump_wavelengths, config) -> list:
    """Branch peaks and widths across a pump-wavelength sweep.

    Runs the full pipeline for every pump value of ``config`` (a RunConfig)
    and extracts the central-channel branch structure.
    """
    from .pipeline import run_point  # local import to avoid a module cycle

    points = []
    for lam_p in pump_wavelengths:
        result = run_point(config, pump_wavelength=lam_p)
        points.append(branch_analysis(result.spatio_spectral, lam_p))
    return points
