"""Binary container and CSV slice export for amplitude tensors.

Layout of the container (all little-endian):

    bytes 0..7    magic ``WGAPDCT1``
    uint32        format version (1)
    uint32        flags, bit 0 = normalized
    4 x uint64    axis lengths: n_omega_s, n_omega_i, n_k_s, n_k_i
    float64[...]  axis values in order omega_s, omega_i, k_s, k_i
    float64[...]  tensor values, interleaved real/imag pairs in row-major
                  (omega_s, omega_i, k_s, k_i) order
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import ConfigError
from .jsa import Grid, JsaTensor

MAGIC = b"WGAPDCT1"
VERSION = 1


def save_tensor(jsa: JsaTensor, path) -> None:
    grid = jsa.grid
    flags = 1 if jsa.normalized else 0
    n_ws, n_wi, n_k, _ = grid.shape
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", VERSION, flags))
        fh.write(struct.pack("<QQQQ", n_ws, n_wi, n_k, n_k))
        for axis in (grid.omega_s_axis, grid.omega_i_axis, grid.k_axis, grid.k_axis):
            fh.write(np.asarray(axis, "<f8").tobytes())
        fh.write(np.ascontiguousarray(jsa.values, "<c16").tobytes())


def load_tensor(path) -> JsaTensor:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ConfigError(f"{path}: not a tensor container (bad magic {magic!r})")
        version, flags = struct.unpack("<II", fh.read(8))
        if version != VERSION:
            raise ConfigError(f"{path}: unsupported container version {version}")
        n_ws, n_wi, n_ks, n_ki = struct.unpack("<QQQQ", fh.read(32))
        if n_ks != n_ki:
            raise ConfigError(f"{path}: momentum axes differ ({n_ks} vs {n_ki})")
        axes = []
        for n in (n_ws, n_wi, n_ks, n_ki):
            axes.append(np.frombuffer(fh.read(8 * n), "<f8").copy())
        data = np.frombuffer(
            fh.read(16 * n_ws * n_wi * n_ks * n_ki), "<c16"
        ).copy()
    values = data.reshape(n_ws, n_wi, n_ks, n_ki)
    grid = Grid(omega_s_axis=axes[0], omega_i_axis=axes[1], k_axis=axes[2])
    return JsaTensor(values=values, grid=grid, normalized=bool(flags & 1))


def export_csv_slices(jsa: JsaTensor, path_prefix) -> list:
    """Write the central momentum and frequency slices as CSV maps.

    Returns the list of written paths.  The momentum slice is taken at the
    frequency pair carrying the most power; the frequency slice at the
    momentum pair carrying the most power.
    """
    from .output import write_csv_map  # deferred; output imports nothing heavy

    grid = jsa.grid
    mag2 = np.abs(jsa.values) ** 2
    i0, j0 = np.unravel_index(
        int(np.argmax(mag2.sum(axis=(2, 3)))), mag2.shape[:2]
    )
    a0, b0 = np.unravel_index(
        int(np.argmax(mag2.sum(axis=(0, 1)))), mag2.shape[2:]
    )
    paths = []
    base = str(path_prefix)
    paths.append(
        write_csv_map(
            base + "_kslice_abs.csv",
            np.abs(jsa.values[i0, j0]),
            grid.k_axis,
            grid.k_axis,
            "k_signal_rad",
            "k_idler_rad",
            comments=[
                "central momentum slice |f|",
                f"omega_s = {float(grid.omega_s_axis[i0])!r} rad/s",
                f"omega_i = {float(grid.omega_i_axis[j0])!r} rad/s",
            ],
        )
    )
    paths.append(
        write_csv_map(
            base + "_wslice_abs.csv",
            np.abs(jsa.values[:, :, a0, b0]),
            grid.omega_s_axis,
            grid.omega_i_axis,
            "omega_signal_rad_per_s",
            "omega_idler_rad_per_s",
            comments=[
                "central frequency slice |f|",
                f"k_s = {float(grid.k_axis[a0])!r} rad",
                f"k_i = {float(grid.k_axis[b0])!r} rad",
            ],
        )
    )
    return paths
