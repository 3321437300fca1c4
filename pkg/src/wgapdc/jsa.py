"""Joint spatio-spectral amplitude of the photon pair.

The central object is :class:`JsaTensor`: the complex amplitude f on the
four-dimensional grid (omega_s, omega_i, k_s, k_i).  It is assembled as the
product of the pump spectral envelope evaluated on the frequency sum, the
pump Bloch distribution evaluated on the wrapped transverse-momentum sum,
and the sinc phase-matching factor of the total mismatch accumulated over
the array length.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernel
from .errors import ConfigError, ContractError, DomainError, EmptyStateError
from .material import C_LIGHT, MaterialModel, coupling, delta_beta_omega

# pump spectral weights below this fraction of the peak are flushed to zero
# so both kernel backends can skip the corresponding rows identically
ALPHA_FLUSH = 1e-38

NORMALIZATION_TOL = 1e-9


def wrap_to_zone(k):
    """Wrap momenta into the first Brillouin zone (-pi, pi]."""
    k = np.asarray(k, dtype=float)
    wrapped = np.pi - np.mod(np.pi - k, 2.0 * np.pi)
    return wrapped if wrapped.ndim else float(wrapped)


@dataclass(frozen=True)
class ArrayGeometry:
    """Crystal length, channel layout and operating temperature."""

    length: float  # m
    channel_count: int
    temperature: float = 185.0  # deg C, mirrors MaterialModel
    pumped_channels: tuple = ((0, 1.0 + 0.0j),)

    def __post_init__(self):
        if self.length <= 0:
            raise ConfigError("array length must be positive")
        if self.channel_count < 3:
            raise ConfigError("channel_count must be at least 3")
        half = (self.channel_count - 1) // 2
        for entry in self.pumped_channels:
            idx = int(entry[0])
            if not (-half <= idx <= half):
                raise ConfigError(
                    f"pumped channel {idx} outside [-{half}, {half}]"
                )


@dataclass(frozen=True)
class PerChannel:
    """Pump illumination given per waveguide channel."""

    channels: tuple
    amplitudes: tuple

    def __post_init__(self):
        if len(self.channels) != len(self.amplitudes):
            raise ConfigError("channels and amplitudes must pair up")
        if len(self.channels) == 0:
            raise ConfigError("per-channel pump needs at least one entry")


@dataclass(frozen=True)
class KWindow:
    """Rectangular pump window in momentum space with a phase polynomial.

    ``phase_poly`` holds (c0, c1, c2) of c0 + c1*k + c2*k**2, evaluated on
    the wrapped momentum representative in (-pi, pi].
    """

    center: float = 0.0  # rad
    width: float = np.pi / 2  # rad
    phase_poly: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not (0.0 < self.width <= 2.0 * np.pi):
            raise ConfigError("k-window width must lie in (0, 2 pi]")
        if len(self.phase_poly) != 3:
            raise ConfigError("phase_poly must hold (c0, c1, c2)")


@dataclass(frozen=True)
class PumpSpec:
    """Spectral envelope and spatial illumination of the pump beam."""

    central_wavelength: float  # m
    spectral_fwhm: float  # m, intensity FWHM in wavelength
    spatial_mode: object = None  # PerChannel or KWindow; default single channel

    def __post_init__(self):
        if self.central_wavelength <= 0:
            raise ConfigError("pump central wavelength must be positive")
        if self.spectral_fwhm <= 0:
            raise ConfigError("pump spectral FWHM must be positive")
        if self.spatial_mode is None:
            object.__setattr__(
                self, "spatial_mode", PerChannel(channels=(0,), amplitudes=(1.0,))
            )
        if not isinstance(self.spatial_mode, (PerChannel, KWindow)):
            raise ConfigError("spatial_mode must be PerChannel or KWindow")

    @property
    def central_omega(self) -> float:
        return 2.0 * np.pi * C_LIGHT / self.central_wavelength

    @property
    def sigma_omega(self) -> float:
        """Std deviation of the pump intensity in angular frequency."""
        fwhm_omega = (
            2.0 * np.pi * C_LIGHT * self.spectral_fwhm / self.central_wavelength**2
        )
        return fwhm_omega / (2.0 * np.sqrt(2.0 * np.log(2.0)))


def _as_readonly(arr):
    arr = np.asarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Grid:
    """Frequency and transverse-momentum axes of the amplitude tensor.

    The momentum axis holds the ``n`` discrete values k_j = 2 pi j / n - pi,
    matching the channel count so momentum/channel transforms invert exactly.
    """

    omega_s_axis: np.ndarray
    omega_i_axis: np.ndarray
    k_axis: np.ndarray

    def __post_init__(self):
        for name in ("omega_s_axis", "omega_i_axis", "k_axis"):
            object.__setattr__(self, name, _as_readonly(np.asarray(getattr(self, name), float)))
        for axis in (self.omega_s_axis, self.omega_i_axis):
            d = np.diff(axis)
            if axis.size < 2 or np.any(d <= 0):
                raise ConfigError("frequency axes must be strictly increasing")
            if not np.allclose(d, d[0], rtol=1e-9, atol=0.0):
                raise ConfigError("frequency axes must be uniformly spaced")

    @staticmethod
    def k_axis_for(channel_count: int) -> np.ndarray:
        j = np.arange(channel_count)
        return 2.0 * np.pi * j / channel_count - np.pi

    @classmethod
    def for_pump(cls, pump_omega, lambda_min, lambda_max, n_omega, channel_count):
        """Uniform frequency axes aligned with the pump energy-conservation line.

        The axis is shifted by less than one step so that half the pump
        frequency lies exactly on the lattice; pairs (omega_s, omega_i) with
        omega_s + omega_i equal to the pump centre then sit exactly on grid
        anti-diagonals, which keeps a narrowband pump correctly sampled on
        coarse grids.
        """
        if n_omega < 2:
            raise ConfigError("n_omega must be at least 2")
        w_lo = 2.0 * np.pi * C_LIGHT / lambda_max
        w_hi = 2.0 * np.pi * C_LIGHT / lambda_min
        if w_lo >= w_hi:
            raise ConfigError("lambda_min must be smaller than lambda_max")
        step = (w_hi - w_lo) / (n_omega - 1)
        half_pump = 0.5 * pump_omega
        start = half_pump - np.floor((half_pump - w_lo) / step) * step
        axis = start + step * np.arange(n_omega)
        return cls(omega_s_axis=axis, omega_i_axis=axis.copy(), k_axis=cls.k_axis_for(channel_count))

    @property
    def d_omega_s(self) -> float:
        return float(self.omega_s_axis[1] - self.omega_s_axis[0])

    @property
    def d_omega_i(self) -> float:
        return float(self.omega_i_axis[1] - self.omega_i_axis[0])

    @property
    def d_k(self) -> float:
        return 2.0 * np.pi / self.k_axis.size

    @property
    def cell_measure(self) -> float:
        return self.d_omega_s * self.d_omega_i * self.d_k * self.d_k

    @property
    def shape(self) -> tuple:
        return (
            self.omega_s_axis.size,
            self.omega_i_axis.size,
            self.k_axis.size,
            self.k_axis.size,
        )


@dataclass(frozen=True)
class JsaTensor:
    """Complex pair amplitude over (omega_s, omega_i, k_s, k_i)."""

    values: np.ndarray
    grid: Grid
    normalized: bool = False

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.shape != self.grid.shape:
            raise ConfigError(
                f"tensor shape {values.shape} does not match grid {self.grid.shape}"
            )
        object.__setattr__(self, "values", _as_readonly(values))


def total_power(jsa: JsaTensor) -> float:
    """Fast-path reduction of the tensor power, sum |f|^2 * cell measure."""
    mag2 = np.abs(jsa.values) ** 2
    return float(np.sum(mag2) * jsa.grid.cell_measure)


def phase_match_factor(delta_beta, length):
    """sinc(L db / 2) * exp(-i L db / 2), the accumulated conversion factor."""
    x = 0.5 * np.asarray(length, float) * np.asarray(delta_beta, float)
    out = kernel.sinc(x) * np.exp(-1j * x)
    return out if np.ndim(out) else complex(out)


def delta_beta_array(ks, ki, omega_s, omega_i, model: MaterialModel):
    """Momentum-dependent mismatch from the array dispersion [1/m].

    -2 C(omega_s) cos(ks) - 2 C(omega_i) cos(ki); 2 pi periodic in both
    momenta, so out-of-zone arguments are accepted.
    """
    lam_s = 2.0 * np.pi * C_LIGHT / np.asarray(omega_s, float)
    lam_i = 2.0 * np.pi * C_LIGHT / np.asarray(omega_i, float)
    ts = (2.0 * coupling(lam_s, model)) * np.cos(ks)
    ti = (2.0 * coupling(lam_i, model)) * np.cos(ki)
    out = -(ts + ti)
    return out if np.ndim(out) else float(out)


def pump_spectral_amplitude(omega_sum, pump: PumpSpec):
    """Gaussian pump envelope on the frequency sum, peak value 1."""
    sig = pump.sigma_omega
    detune = np.asarray(omega_sum, float) - pump.central_omega
    out = np.exp(-(detune * detune) / (4.0 * sig * sig))
    return out if np.ndim(out) else float(out)


def _bloch_amplitude_raw(mode, k_values):
    """Unnormalized Bloch amplitude of the spatial pump pattern."""
    k = np.asarray(k_values, dtype=float)
    if isinstance(mode, PerChannel):
        channels = np.asarray(mode.channels, dtype=float)
        amps = np.asarray(mode.amplitudes, dtype=complex)
        if not np.any(np.abs(amps) > 0):
            raise EmptyStateError("per-channel pump has zero total power")
        phases = np.exp(-1j * np.multiply.outer(k, channels))
        return phases @ amps / (2.0 * np.pi)
    if isinstance(mode, KWindow):
        kw = wrap_to_zone(k)
        dist = np.abs(wrap_to_zone(kw - mode.center))
        inside = dist <= mode.width / 2.0
        c0, c1, c2 = mode.phase_poly
        phase = c0 + c1 * kw + c2 * kw * kw
        return np.where(inside, np.exp(1j * phase), 0.0 + 0.0j)
    raise ConfigError("spatial_mode must be PerChannel or KWindow")


def _bloch_norm(pump: PumpSpec, grid: Grid) -> float:
    on_axis = _bloch_amplitude_raw(pump.spatial_mode, grid.k_axis)
    power = float(np.sum(np.abs(on_axis) ** 2) * grid.d_k)
    if power <= 0.0:
        raise EmptyStateError("pump Bloch distribution has zero power on the grid")
    return np.sqrt(power)


def pump_bloch_distribution(pump: PumpSpec, grid: Grid):
    """Pump Bloch amplitude sampled on the momentum axis, unit power.

    Normalized so that sum |A(k_j)|^2 d_k = 1.
    """
    raw = _bloch_amplitude_raw(pump.spatial_mode, grid.k_axis)
    return raw / _bloch_norm(pump, grid)


def build_jsa(
    grid: Grid,
    geometry: ArrayGeometry,
    pump: PumpSpec,
    model: MaterialModel,
) -> JsaTensor:
    """Assemble the unnormalized joint amplitude tensor on ``grid``."""
    if grid.k_axis.size != geometry.channel_count:
        raise ConfigError(
            f"momentum axis length {grid.k_axis.size} does not match "
            f"channel count {geometry.channel_count}"
        )
    ws = grid.omega_s_axis
    wi = grid.omega_i_axis

    alpha2 = pump_spectral_amplitude(ws[:, None] + wi[None, :], pump)
    peak = alpha2.max()
    if peak <= 0.0:
        raise EmptyStateError("pump spectral envelope vanishes on the grid")
    alpha2 = np.where(alpha2 < peak * ALPHA_FLUSH, 0.0, alpha2)

    dbw = delta_beta_omega(ws[:, None], wi[None, :], model)
    c_s = np.asarray(coupling(2.0 * np.pi * C_LIGHT / ws, model), float)
    c_i = np.asarray(coupling(2.0 * np.pi * C_LIGHT / wi, model), float)

    k = grid.k_axis
    ksum = wrap_to_zone(k[:, None] + k[None, :])
    pump2 = _bloch_amplitude_raw(pump.spatial_mode, ksum) / _bloch_norm(pump, grid)

    values = kernel.assemble(
        alpha2, dbw, pump2, c_s, c_i, np.cos(k), geometry.length
    )
    return JsaTensor(values=values, grid=grid, normalized=False)


def normalize(jsa: JsaTensor) -> JsaTensor:
    """Scale the tensor to unit total power.  Idempotent."""
    power = total_power(jsa)
    if power <= 0.0:
        raise EmptyStateError("cannot normalize a tensor with zero power")
    values = jsa.values / np.sqrt(power)
    return JsaTensor(values=values, grid=jsa.grid, normalized=True)


def apply_spectral_filter(jsa: JsaTensor, bounds) -> JsaTensor:
    """Rectangular frequency filter followed by renormalization.

    ``bounds`` is (omega_s_min, omega_s_max, omega_i_min, omega_i_max) in
    rad/s; grid points on the boundary pass.
    """
    ws_min, ws_max, wi_min, wi_max = bounds
    if ws_min >= ws_max or wi_min >= wi_max:
        raise ConfigError("filter bounds must be ordered min < max")
    keep_s = (jsa.grid.omega_s_axis >= ws_min) & (jsa.grid.omega_s_axis <= ws_max)
    keep_i = (jsa.grid.omega_i_axis >= wi_min) & (jsa.grid.omega_i_axis <= wi_max)
    if not keep_s.any() or not keep_i.any():
        raise EmptyStateError("filter rectangle does not overlap the grid")
    mask = np.multiply.outer(keep_s, keep_i)[:, :, None, None]
    values = np.where(mask, jsa.values, 0.0 + 0.0j)
    filtered = JsaTensor(values=values, grid=jsa.grid, normalized=False)
    if total_power(filtered) <= 0.0:
        raise EmptyStateError("filter removed all amplitude from the state")
    return normalize(filtered)


def require_normalized(jsa: JsaTensor, op: str):
    if not jsa.normalized:
        raise ContractError(f"{op} requires a normalized tensor")
    power = total_power(jsa)
    if abs(power - 1.0) > 1e-6:
        raise ContractError(
            f"{op}: tensor flagged normalized but holds power {power!r}"
        )
