"""Deterministic CSV, image and manifest writers for scenario artifacts.

CSV grids are the artifacts of record; images are diagnostic false-color
portable pixmaps with a text sidecar recording axis ranges and the value
scale.  The manifest lists every written file with its byte length and
SHA-256 hash so repeated runs can be compared byte for byte.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np


def _fmt(value) -> str:
    """Shortest round-trip decimal form, free of numpy scalar reprs."""
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    return repr(value)


def write_csv_map(path, values, row_axis, col_axis, row_label, col_label, comments=()):
    """Row-major CSV grid with axis headers; returns the path."""
    path = Path(path)
    values = np.asarray(values)
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(f"# rows: {row_label}, columns: {col_label}\n")
        fh.write(",".join([f"{row_label}\\{col_label}"] + [_fmt(c) for c in np.asarray(col_axis)]) + "\n")
        for r, row in zip(np.asarray(row_axis), values):
            fh.write(",".join([_fmt(r)] + [_fmt(v) for v in row]) + "\n")
    return path


def write_csv_table(path, columns, header, comments=()):
    """CSV table from parallel columns; returns the path."""
    path = Path(path)
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _false_color(norm):
    """Map [0, 1] to a fixed blue-teal-yellow ramp, 8 bit per channel."""
    t = np.clip(norm, 0.0, 1.0)
    r = np.clip(3.0 * t - 1.5, 0.0, 1.0)
    g = np.clip(1.5 * t, 0.0, 1.0) ** 1.2
    b = np.clip(1.0 - 2.0 * np.abs(t - 0.35), 0.05, 1.0) * (1.0 - 0.6 * r)
    rgb = np.stack([r, g, b], axis=-1)
    return (rgb * 255.0 + 0.5).astype(np.uint8)


def write_ppm_map(path, values, row_axis, col_axis, row_label, col_label, scale_note=""):
    """False-color P6 pixmap plus a sidecar describing axes and scale."""
    path = Path(path)
    values = np.asarray(values, dtype=float)
    peak = values.max()
    norm = values / peak if peak > 0 else values
    pixels = _false_color(norm[::-1, :])  # first row at the bottom of the image
    with open(path, "wb") as fh:
        fh.write(f"P6\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode())
        fh.write(pixels.tobytes())
    sidecar = path.with_suffix(path.suffix + ".txt")
    with open(sidecar, "w", newline="\n") as fh:
        fh.write(f"rows: {row_label} from {_fmt(np.min(row_axis))} to {_fmt(np.max(row_axis))}\n")
        fh.write(f"columns: {col_label} from {_fmt(np.min(col_axis))} to {_fmt(np.max(col_axis))}\n")
        fh.write(f"value scale: 0 .. {_fmt(peak)}\n")
        if scale_note:
            fh.write(scale_note + "\n")
    return [path, sidecar]


def write_manifest(out_dir, paths):
    """One line per artifact: relative path, byte length, sha256."""
    out_dir = Path(out_dir)
    lines = []
    for p in sorted(Path(p) for p in paths):
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
        lines.append(f"{p.relative_to(out_dir)} {p.stat().st_size} {digest}")
    manifest = out_dir / "manifest.txt"
    manifest.write_text("\n".join(lines) + "\n", newline="\n")
    return manifest
