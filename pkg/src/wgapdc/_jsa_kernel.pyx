# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled assembly kernel for the joint amplitude tensor.

Mirrors wgapdc._kernel_py.assemble entry for entry: same sinc series branch,
same operation grouping, same zero-row skip.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, sin

DEF SINC_SERIES_CUTOFF = 1e-4


cdef inline double _sinc(double x) nogil:
    cdef double x2
    if fabs(x) < SINC_SERIES_CUTOFF:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return sin(x) / x


def assemble(double[:, ::1] alpha2, double[:, ::1] dbw,
             double complex[:, ::1] pump2,
             double[::1] c_s, double[::1] c_i, double[::1] cos_k,
             double length):
    cdef Py_ssize_t n_ws = alpha2.shape[0]
    cdef Py_ssize_t n_wi = alpha2.shape[1]
    cdef Py_ssize_t n_k = cos_k.shape[0]
    out_arr = np.zeros((n_ws, n_wi, n_k, n_k), dtype=np.complex128)
    cdef double complex[:, :, :, ::1] out = out_arr
    ts_arr = 2.0 * np.multiply.outer(np.asarray(c_s), np.asarray(cos_k))
    ti_arr = 2.0 * np.multiply.outer(np.asarray(c_i), np.asarray(cos_k))
    cdef double[:, ::1] ts = ts_arr
    cdef double[:, ::1] ti = ti_arr
    cdef double half_len = 0.5 * length
    cdef Py_ssize_t i, j, a, b
    cdef double aij, db, x, s
    cdef double complex pm, amp

    with nogil:
        for i in range(n_ws):
            for j in range(n_wi):
                aij = alpha2[i, j]
                if aij == 0.0:
                    continue
                for a in range(n_k):
                    for b in range(n_k):
                        db = dbw[i, j] - (ts[i, a] + ti[j, b])
                        x = half_len * db
                        s = _sinc(x)
                        pm = s * cos(x) - 1j * (s * sin(x))
                        amp = aij * pump2[a, b]
                        out[i, j, a, b] = amp * pm
    return out_arr
