"""Dispersion, quasi-phase-matching and coupling model of the nonlinear array.

The chip is a periodically poled, z-cut lithium niobate waveguide array
operated far above room temperature, so every index evaluation carries the
temperature correction of the Sellmeier expansion.  The evanescent coupling
between neighbouring channels follows the exponential-tail overlap model
C(lambda) = scale * (1/lambda) * exp(-damping * n(lambda)/lambda).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FitError

C_LIGHT = 299792458.0  # vacuum speed of light [m/s]

# Temperature-dependent Sellmeier coefficients for the extraordinary index of
# congruent LiNbO3, transcribed from D. H. Jundt, Opt. Lett. 22, 1553 (1997).
# n^2 = a1 + b1 f + (a2 + b2 f)/(L^2 - (a3 + b3 f)^2) + (a4 + b4 f)/(L^2 - a5^2)
#       - a6 L^2,  with L in micrometres and f = (T - 24.5)(T + 570.82), T in C.
SELLMEIER_LNB_E = (
    5.35583,
    0.100473,
    0.20692,
    100.0,
    11.34927,
    1.5334e-2,
    4.629e-7,
    3.862e-8,
    -0.89e-8,
    2.657e-5,
)

WAVELENGTH_VALIDITY = (0.4e-6, 5.0e-6)  # m, range of the Sellmeier fit
TEMPERATURE_VALIDITY = (20.0, 300.0)  # deg C


@dataclass(frozen=True)
class MaterialModel:
    """Material and grating parameters, fixed for one run.

    ``qpm_period_eff`` is the effective grating period of the poled
    nonlinearity; it is normally obtained with :func:`fit_qpm_period` so that
    the spectral mismatch vanishes at a chosen signal/idler pair.
    ``constant_coupling`` replaces the wavelength-dependent coupling model by
    a fixed value in 1/m (used by the near-degenerate scenarios).
    ``index_offset`` is an optional additive correction standing in for modal
    dispersion on top of the bulk index.
    """

    sellmeier_coefficients: tuple = SELLMEIER_LNB_E
    temperature: float = 185.0  # deg C
    qpm_period_eff: float | None = None  # m
    coupling_scale: float = 6.5e-2  # dimensionless
    damping_scale: float = 4.9e-6  # m
    index_offset: float = 0.0
    constant_coupling: float | None = None  # 1/m

    def __post_init__(self):
        lo, hi = TEMPERATURE_VALIDITY
        if not (lo <= self.temperature <= hi):
            raise DomainError(
                f"temperature {self.temperature} C outside validity window "
                f"[{lo}, {hi}] C"
            )
        if len(self.sellmeier_coefficients) != 10:
            raise DomainError("sellmeier_coefficients must hold 10 numbers")
        if self.qpm_period_eff is not None and self.qpm_period_eff <= 0:
            raise DomainError("qpm_period_eff must be positive")
        if self.coupling_scale < 0:
            raise DomainError("coupling_scale must be non-negative")
        if self.damping_scale < 0:
            raise DomainError("damping_scale must be non-negative")
        if self.constant_coupling is not None and self.constant_coupling < 0:
            raise DomainError("constant_coupling must be non-negative")


def refractive_index(wavelength, model: MaterialModel):
    """Temperature-corrected extraordinary index at ``wavelength`` (m).

    Accepts scalars or arrays.  Raises :class:`DomainError` outside the
    declared wavelength validity window instead of extrapolating.
    """
    lam = np.asarray(wavelength, dtype=float)
    lo, hi = WAVELENGTH_VALIDITY
    if np.any(lam < lo) or np.any(lam > hi):
        bad = lam if lam.ndim == 0 else lam[(lam < lo) | (lam > hi)].flat[0]
        raise DomainError(
            f"wavelength {float(bad):.6e} m outside validity window [{lo}, {hi}] m"
        )
    a1, a2, a3, a4, a5, a6, b1, b2, b3, b4 = model.sellmeier_coefficients
    f = (model.temperature - 24.5) * (model.temperature + 570.82)
    lam_um = lam * 1e6
    lam2 = lam_um * lam_um
    n2 = (
        a1
        + b1 * f
        + (a2 + b2 * f) / (lam2 - (a3 + b3 * f) ** 2)
        + (a4 + b4 * f) / (lam2 - a5 * a5)
        - a6 * lam2
    )
    n = np.sqrt(n2) + model.index_offset
    if np.any(~np.isfinite(n)) or np.any(n <= 1.0):
        raise DomainError("refractive index evaluation left the physical range")
    return n if n.ndim else float(n)


def beta0(angular_frequency, model: MaterialModel):
    """Single-waveguide propagation constant n(omega) * omega / c [rad/m]."""
    omega = np.asarray(angular_frequency, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("angular frequency must be positive")
    lam = 2.0 * np.pi * C_LIGHT / omega
    b = refractive_index(lam, model) * omega / C_LIGHT
    return b if np.ndim(b) else float(b)


def coupling(wavelength, model: MaterialModel):
    """Nearest-neighbour coupling rate C(lambda) [1/m].

    Uses the exponential-tail overlap model unless the model pins a constant
    coupling value.
    """
    lam = np.asarray(wavelength, dtype=float)
    if model.constant_coupling is not None:
        c = np.full_like(lam, model.constant_coupling, dtype=float)
        # still guard the validity range so scenarios cannot silently leave it
        refractive_index(lam, model)
        return c if c.ndim else float(c)
    n = refractive_index(lam, model)
    c = model.coupling_scale * (1.0 / lam) * np.exp(-model.damping_scale * n / lam)
    return c if np.ndim(c) else float(c)


def _qpm_term(model: MaterialModel) -> float:
    if model.qpm_period_eff is None:
        raise DomainError("material model has no effective grating period set")
    return 2.0 * np.pi / model.qpm_period_eff


def delta_beta_omega(omega_s, omega_i, model: MaterialModel):
    """Spectral phase mismatch of the poled single waveguide [1/m].

    beta0(omega_s + omega_i) - beta0(omega_s) - beta0(omega_i) - 2 pi / period.
    Symmetric under signal/idler exchange.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    total = beta0(omega_s + omega_i, model)
    d = total - (beta0(omega_s, model) + beta0(omega_i, model)) - _qpm_term(model)
    return d if np.ndim(d) else float(d)


def fit_qpm_period(target_pair, pump_wavelength, model: MaterialModel) -> float:
    """Effective grating period that phase-matches ``target_pair`` exactly.

    ``target_pair`` is the (signal, idler) wavelength pair in metres and must
    satisfy energy conservation with ``pump_wavelength`` to 1e-6 relative.
    The grating term enters the mismatch additively, so the root is available
    in closed form; the residual is verified afterwards.
    """
    lam_s, lam_i = target_pair
    inv_sum = 1.0 / lam_s + 1.0 / lam_i
    if abs(inv_sum - 1.0 / pump_wavelength) * pump_wavelength > 1e-6:
        raise FitError(
            "target pair violates energy conservation: "
            f"1/{lam_s:.4e} + 1/{lam_i:.4e} != 1/{pump_wavelength:.4e}"
        )
    omega_s = 2.0 * np.pi * C_LIGHT / lam_s
    omega_i = 2.0 * np.pi * C_LIGHT / lam_i
    mismatch = (
        beta0(omega_s + omega_i, model)
        - (beta0(omega_s, model) + beta0(omega_i, model))
    )
    if mismatch <= 0:
        raise FitError(
            f"no positive grating period exists (bare mismatch {mismatch:.3e} 1/m)"
        )
    period = 2.0 * np.pi / mismatch
    fitted = MaterialModel(
        sellmeier_coefficients=model.sellmeier_coefficients,
        temperature=model.temperature,
        qpm_period_eff=period,
        coupling_scale=model.coupling_scale,
        damping_scale=model.damping_scale,
        index_offset=model.index_offset,
        constant_coupling=model.constant_coupling,
    )
    residual = delta_beta_omega(omega_s, omega_i, fitted)
    if abs(residual) >= 1e-6:
        raise FitError(f"grating fit residual {residual:.3e} 1/m exceeds 1e-6")
    return period


def with_qpm_period(model: MaterialModel, period: float) -> MaterialModel:
    """Copy of ``model`` with the effective grating period replaced."""
    return MaterialModel(
        sellmeier_coefficients=model.sellmeier_coefficients,
        temperature=model.temperature,
        qpm_period_eff=period,
        coupling_scale=model.coupling_scale,
        damping_scale=model.damping_scale,
        index_offset=model.index_offset,
        constant_coupling=model.constant_coupling,
    )
