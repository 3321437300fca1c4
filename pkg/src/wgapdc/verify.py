"""Oracle equivalence suite: every fast-path quantity against its reference.

Each check returns (name, passed, detail).  The CLI ``verify`` subcommand
prints the table; the acceptance tests assert on the same results.
"""

from __future__ import annotations

import numpy as np

from . import oracle
from .correlations import unitary_k_to_channel
from .jsa import ArrayGeometry, Grid, JsaTensor, PerChannel, PumpSpec, phase_match_factor
from .jsa import build_jsa, normalize, total_power, wrap_to_zone
from .material import MaterialModel, with_qpm_period


def check_phase_match_factor(n_samples=100, z_steps=1_000_000, seed=1):
    """Closed-form conversion factor against trapezoidal z-integration."""
    rng = np.random.default_rng(seed)
    length = 0.04
    worst = 0.0
    for db in rng.uniform(-1e4, 1e4, n_samples):
        ref = oracle.pm_integral(float(db), length, z_steps)
        fast = phase_match_factor(float(db), length)
        worst = max(worst, abs(ref - fast))
    return worst


def check_transform(n_samples=100, channel_count=41, seed=2):
    """FFT-based unitary transform against the literal double sum."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        arr = rng.normal(size=(channel_count, channel_count)) + 1j * rng.normal(
            size=(channel_count, channel_count)
        )
        ref = oracle.direct_dft2(arr)
        fast = unitary_k_to_channel(arr)
        worst = max(worst, float(np.abs(ref - fast).max()))
    return worst


def _fast_fixed_frequency_gamma_n(channel_count, coupling_value, beta_mismatch, length, pump_channels):
    """Channel coincidence map of one frequency slice via the fast path."""
    k = Grid.k_axis_for(channel_count)
    amps = np.zeros(channel_count, dtype=complex)
    half = (channel_count - 1) // 2
    channels = np.array([c for c, _ in pump_channels], dtype=float)
    values = np.array([v for _, v in pump_channels], dtype=complex)
    ksum = wrap_to_zone(k[:, None] + k[None, :])
    bloch = np.exp(-1j * np.multiply.outer(ksum, channels)) @ values
    db = beta_mismatch - (
        2.0 * coupling_value * np.cos(k)[:, None]
        + 2.0 * coupling_value * np.cos(k)[None, :]
    )
    slice_k = bloch * phase_match_factor(db, length)
    mag = np.abs(unitary_k_to_channel(slice_k)) ** 2
    return mag / mag.sum()


def check_realspace(detunings=(0.0, 800.0, -800.0), channel_count=51, coupling_value=400.0, z_steps=20_000):
    """Real-space propagation oracle against the fast-path slice.

    The detunings are the spectral mismatches of the near-degenerate contour
    family (0 and +-2 C0 with C0 = 400 1/m).
    """
    worst = 0.0
    for db in detunings:
        problem = oracle.PropagationProblem(
            channel_count=channel_count,
            coupling_s=coupling_value,
            coupling_i=coupling_value,
            beta_mismatch=db,
            length=0.04,
            pump_channels=((0, 1.0),),
            z_steps=z_steps,
        )
        psi = oracle.realspace_pair_amplitude(problem)
        ref = np.abs(psi) ** 2
        ref = ref / ref.sum()
        fast = _fast_fixed_frequency_gamma_n(
            channel_count, coupling_value, db, 0.04, ((0, 1.0),)
        )
        worst = max(worst, float(np.abs(ref - fast).max() / fast.max()))
    return worst


def _random_tensor(rng, n_w=6, n_k=5):
    axis = np.linspace(1.20e15, 1.23e15, n_w)
    grid = Grid(
        omega_s_axis=axis,
        omega_i_axis=axis.copy(),
        k_axis=Grid.k_axis_for(n_k),
    )
    values = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    return JsaTensor(values=values, grid=grid, normalized=False)


def check_power_reduction(n_samples=100, seed=3):
    """Fast power reduction against exact compensated summation."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        jsa = _random_tensor(rng)
        worst = max(worst, abs(total_power(jsa) - oracle.independent_power(jsa)))
    return worst


def run_verification(quick=False):
    """Run all oracle equivalences; returns (name, passed, detail) rows."""
    n = 10 if quick else 100
    z_pm = 100_000 if quick else 1_000_000
    z_rs = 4_000 if quick else 20_000
    rows = []

    worst = check_phase_match_factor(n_samples=n, z_steps=z_pm)
    tol = 1e-6 if quick else 1e-8
    rows.append(("phase_match_factor vs pm_integral", worst <= tol, f"max abs diff {worst:.3e} (tol {tol:.0e})"))

    worst = check_transform(n_samples=n)
    rows.append(("fast transform vs direct_dft2", worst <= 1e-9, f"max abs diff {worst:.3e} (tol 1e-09)"))

    worst = check_realspace(z_steps=z_rs)
    rows.append(("realspace oracle vs gamma_n slice", worst <= 1e-6, f"max rel diff {worst:.3e} (tol 1e-06)"))

    worst = check_power_reduction(n_samples=n)
    rows.append(("power reduction vs compensated sum", worst <= 1e-12, f"max abs diff {worst:.3e} (tol 1e-12)"))

    return rows
