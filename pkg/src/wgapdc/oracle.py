"""Brute-force reference implementations used to validate the fast paths.

Everything in this module favours transparency over speed: explicit
quadrature instead of closed forms, literal double-sum Fourier transforms
instead of FFTs, and per-photon matrix propagation instead of the analytic
phase-matching factor.  Each fast-path quantity has a counterpart here and
the test suite holds them against each other on randomized inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .jsa import JsaTensor


@dataclass(frozen=True)
class PropagationProblem:
    """Fixed-frequency pair-generation problem for the real-space oracle.

    Frequencies enter only through the two coupling values and the spectral
    mismatch, so a single run validates one (omega_s, omega_i) slice of the
    full tensor pipeline.
    """

    channel_count: int
    coupling_s: float  # 1/m
    coupling_i: float  # 1/m
    beta_mismatch: float  # 1/m
    length: float  # m
    pump_channels: tuple  # ((channel, complex amplitude), ...)
    z_steps: int
    boundary: str = "ring"

    def __post_init__(self):
        if self.channel_count < 3 or self.channel_count % 2 == 0:
            raise DomainError("channel_count must be odd and at least 3")
        if self.length <= 0:
            raise DomainError("length must be positive")
        if self.z_steps < 1000:
            raise DomainError("z_steps must be at least 1000 for acceptance runs")
        if self.boundary not in ("ring", "open"):
            raise DomainError("boundary must be 'ring' or 'open'")
        half = (self.channel_count - 1) // 2
        for entry in self.pump_channels:
            if not (-half <= int(entry[0]) <= half):
                raise DomainError(f"pump channel {entry[0]} outside the array")


def pm_integral(delta_beta: float, length: float, z_steps: int) -> complex:
    """Trapezoidal evaluation of (1/L) integral_{-L}^{0} exp(i db z) dz."""
    if z_steps < 100:
        raise DomainError("pm_integral needs at least 100 steps")
    z = np.linspace(-length, 0.0, z_steps + 1)
    vals = np.exp(1j * delta_beta * z)
    return complex(np.trapz(vals, dx=length / z_steps) / length)


def _eigenbasis(channel_count: int, boundary: str):
    """Eigenvectors (columns) and eigenvalues of the coupling generator.

    Ring boundary uses the discrete momentum set of the fast path, open
    boundary the sine modes of the finite chain.
    """
    n = channel_count
    half = (n - 1) // 2
    sites = np.arange(-half, half + 1)
    if boundary == "ring":
        k = 2.0 * np.pi * np.arange(n) / n - np.pi
        vecs = np.exp(1j * np.multiply.outer(sites, k)) / np.sqrt(n)
        vals = 2.0 * np.cos(k)
    else:
        m = np.arange(1, n + 1)
        vecs = np.sqrt(2.0 / (n + 1)) * np.sin(
            np.pi * np.multiply.outer(sites + half + 1, m) / (n + 1)
        ).astype(complex)
        vals = 2.0 * np.cos(np.pi * m / (n + 1))
    return vecs, vals


def propagator(channel_count: int, coupling_value: float, distance: float, boundary: str = "ring"):
    """Single-photon transfer matrix over ``distance`` of array propagation."""
    vecs, vals = _eigenbasis(channel_count, boundary)
    phases = np.exp(1j * coupling_value * distance * vals)
    return (vecs * phases) @ vecs.conj().T


def _pair_amplitude_at_steps(problem: PropagationProblem, z_steps: int):
    n = problem.channel_count
    half = (n - 1) // 2
    vecs, vals = _eigenbasis(n, problem.boundary)
    amp = np.zeros(n, dtype=complex)
    for channel, value in problem.pump_channels:
        amp[int(channel) + half] = complex(value)

    z = np.linspace(-problem.length, 0.0, z_steps + 1)
    weights = np.full(z_steps + 1, problem.length / z_steps)
    weights[0] *= 0.5
    weights[-1] *= 0.5

    acc = np.zeros((n, n), dtype=complex)
    for zj, wj in zip(z, weights):
        # pair born at zj, each photon then crosses the remaining distance
        # -zj; vals already carries the factor 2 of the dispersion term
        phase_s = np.exp(-1j * problem.coupling_s * zj * vals)
        phase_i = np.exp(-1j * problem.coupling_i * zj * vals)
        g_s = (vecs * phase_s) @ vecs.conj().T
        g_i = (vecs * phase_i) @ vecs.conj().T
        acc += (wj * np.exp(1j * problem.beta_mismatch * zj)) * (
            g_s @ np.diag(amp) @ g_i.T
        )
    return acc / problem.length


def realspace_pair_amplitude(problem: PropagationProblem, check_convergence: bool = True):
    """Two-photon channel amplitude from explicit z-resolved propagation.

    Integrates over the pair creation position, propagating each photon with
    the matrix exponential of the nearest-neighbour generator.  With
    ``check_convergence`` the step count is doubled once and the run fails
    if the result moves by more than 1e-6 of its peak.
    """
    coarse = _pair_amplitude_at_steps(problem, problem.z_steps)
    if not check_convergence:
        return coarse
    fine = _pair_amplitude_at_steps(problem, 2 * problem.z_steps)
    scale = np.abs(fine).max()
    if scale > 0 and np.abs(fine - coarse).max() > 1e-6 * scale:
        raise ConvergenceError(
            "pair amplitude not converged: doubling z_steps moved the result "
            f"by {np.abs(fine - coarse).max() / scale:.3e} of its peak"
        )
    return fine


def direct_dft2(kspace, inverse: bool = False):
    """Literal O(N^4) unitary transform between momentum and channel space.

    Forward: out[n, m] = (1/N) sum_{a,b} in[a, b] exp(i (k_a n + k_b m))
    with k_j = 2 pi j / N - pi and centered channel labels.
    """
    arr = np.asarray(kspace, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DomainError("direct_dft2 expects a square 2D array")
    n = arr.shape[0]
    half = (n - 1) // 2
    k = 2.0 * np.pi * np.arange(n) / n - np.pi
    sign = -1.0 if inverse else 1.0
    out = np.empty_like(arr)
    for row, ns in enumerate(range(-half, half + 1)):
        e_row = np.exp(sign * 1j * k * ns)
        for col, ni in enumerate(range(-half, half + 1)):
            e_col = np.exp(sign * 1j * k * ni)
            out[row, col] = np.sum(arr * np.multiply.outer(e_row, e_col)) / n
    return out


def independent_power(jsa: JsaTensor) -> float:
    """Tensor power via exact compensated summation in a permuted order."""
    mag2 = (np.abs(jsa.values) ** 2).ravel()
    order = np.random.default_rng(20260809).permutation(mag2.size)
    return math.fsum(mag2[order]) * jsa.grid.cell_measure
