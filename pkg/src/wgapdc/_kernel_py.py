"""NumPy implementation of the amplitude-tensor assembly kernel.

This is the fallback for :mod:`wgapdc.kernel` when the compiled extension is
unavailable.  Both backends evaluate, entry by entry,

    out[i, j, a, b] = alpha2[i, j] * pump2[a, b]
                      * sinc(x) * exp(-1j * x),
    x = 0.5 * length * (dbw[i, j] - (2 c_s[i] cos_k[a] + 2 c_i[j] cos_k[b]))

with the small-argument series branch of ``sinc`` and identical operation
grouping, so that signal/idler exchange symmetry holds bit for bit and the
two backends agree to floating round-off.
"""

from __future__ import annotations

import numpy as np

SINC_SERIES_CUTOFF = 1e-4


def sinc(x):
    """sin(x)/x with a series branch below the cancellation cutoff."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    out = np.sin(safe) / safe
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    out = np.where(small, series, out)
    return out if out.ndim else float(out)


def assemble(alpha2, dbw, pump2, c_s, c_i, cos_k, length):
    """Assemble the joint amplitude tensor, slab by slab over the first axis.

    Rows with exactly zero pump spectral weight are skipped and written as
    zeros; the caller is responsible for flushing negligible weights to zero.
    """
    n_ws, n_wi = alpha2.shape
    n_k = cos_k.shape[0]
    out = np.zeros((n_ws, n_wi, n_k, n_k), dtype=np.complex128)
    ts = 2.0 * np.multiply.outer(np.asarray(c_s, float), np.asarray(cos_k, float))
    ti = 2.0 * np.multiply.outer(np.asarray(c_i, float), np.asarray(cos_k, float))
    half_len = 0.5 * length
    for i in range(n_ws):
        nz = np.nonzero(alpha2[i])[0]
        if nz.size == 0:
            continue
        # grouping (dbw - (ts + ti)) keeps exchange symmetry exact
        db = dbw[i, nz, None, None] - (ts[i][None, :, None] + ti[nz][:, None, :])
        x = half_len * db
        pm = sinc(x) * np.exp(-1j * x)
        out[i, nz] = (alpha2[i, nz, None, None] * pump2[None, :, :]) * pm
    return out
