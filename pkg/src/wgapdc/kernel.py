"""Backend selection for the amplitude-tensor assembly kernel.

The compiled Cython kernel is preferred when present; otherwise the NumPy
implementation is used.  ``WGAPDC_KERNEL=numpy`` or ``WGAPDC_KERNEL=cython``
forces a backend (the latter fails loudly if the extension is missing).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernel_py

try:
    from . import _jsa_kernel as _compiled
except ImportError:
    _compiled = None

_FORCED = os.environ.get("WGAPDC_KERNEL", "").strip().lower()
if _FORCED in ("numpy", "python", "pure"):
    _ACTIVE = "numpy"
elif _FORCED in ("cython", "compiled"):
    if _compiled is None:
        raise ImportError(
            "WGAPDC_KERNEL requested the compiled kernel but the "
            "wgapdc._jsa_kernel extension is not built"
        )
    _ACTIVE = "cython"
elif _FORCED:
    raise ImportError(f"unknown WGAPDC_KERNEL value {_FORCED!r}")
else:
    _ACTIVE = "cython" if _compiled is not None else "numpy"

sinc = _kernel_py.sinc


def backend_name() -> str:
    """Name of the kernel backend active in this process."""
    return _ACTIVE


def available_backends() -> tuple:
    return ("numpy", "cython") if _compiled is not None else ("numpy",)


def assemble(alpha2, dbw, pump2, c_s, c_i, cos_k, length, backend=None):
    """Dispatch the tensor assembly to the requested or active backend."""
    alpha2 = np.ascontiguousarray(alpha2, dtype=np.float64)
    dbw = np.ascontiguousarray(dbw, dtype=np.float64)
    pump2 = np.ascontiguousarray(pump2, dtype=np.complex128)
    c_s = np.ascontiguousarray(c_s, dtype=np.float64)
    c_i = np.ascontiguousarray(c_i, dtype=np.float64)
    cos_k = np.ascontiguousarray(cos_k, dtype=np.float64)
    chosen = backend or _ACTIVE
    if chosen == "cython":
        if _compiled is None:
            raise ValueError("compiled kernel not available")
        return _compiled.assemble(alpha2, dbw, pump2, c_s, c_i, cos_k, float(length))
    if chosen == "numpy":
        return _kernel_py.assemble(alpha2, dbw, pump2, c_s, c_i, cos_k, float(length))
    raise ValueError(f"unknown kernel backend {chosen!r}")
