"""Benchmark the amplitude-tensor assembly kernel: compiled vs NumPy.

Runs the default experimental-comparison assembly (128 x 128 frequency
points, 41 channels) plus a broadband variant in which every frequency row
carries pump weight, so the zero-row skip cannot help.

    python benchmarks/bench_kernel.py
"""

import time

import numpy as np

from wgapdc import kernel
from wgapdc.config import parse_config
from wgapdc.jsa import ALPHA_FLUSH, pump_spectral_amplitude, wrap_to_zone
from wgapdc.material import C_LIGHT, coupling, delta_beta_omega


def build_inputs(broadband: bool):
    cfg = parse_config("")
    model = cfg.material_model()
    pump = cfg.pump_spec()
    grid = cfg.grid(pump)
    ws = grid.omega_s_axis
    wi = grid.omega_i_axis
    if broadband:
        alpha2 = np.ones((ws.size, wi.size))
    else:
        alpha2 = pump_spectral_amplitude(ws[:, None] + wi[None, :], pump)
        alpha2 = np.where(alpha2 < alpha2.max() * ALPHA_FLUSH, 0.0, alpha2)
    dbw = delta_beta_omega(ws[:, None], wi[None, :], model)
    c_s = np.asarray(coupling(2 * np.pi * C_LIGHT / ws, model))
    c_i = np.asarray(coupling(2 * np.pi * C_LIGHT / wi, model))
    k = grid.k_axis
    pump2 = np.ones((k.size, k.size), dtype=complex)
    pump2 *= np.exp(1j * 0.1 * wrap_to_zone(k[:, None] + k[None, :]))
    return alpha2, dbw, pump2, c_s, c_i, np.cos(k), 0.04


def bench(backend, inputs, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = kernel.assemble(*inputs, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    backends = kernel.available_backends()
    print(f"available backends: {backends} (active: {kernel.backend_name()})")
    for label, broadband in (("narrowband pump (default run)", False), ("broadband pump (dense)", True)):
        inputs = build_inputs(broadband)
        n_entries = inputs[0].shape[0] * inputs[0].shape[1] * inputs[5].size ** 2
        print(f"\n{label}: {n_entries / 1e6:.1f}M tensor entries")
        results = {}
        for backend in backends:
            seconds, out = bench(backend, inputs)
            results[backend] = out
            rate = n_entries / seconds / 1e6
            print(f"  {backend:>6}: {seconds * 1e3:8.1f} ms  ({rate:8.1f} M entries/s)")
        if len(results) == 2:
            diff = np.abs(results["numpy"] - results["cython"]).max()
            print(f"  backend max abs difference: {diff:.3e}")


if __name__ == "__main__":
    main()
