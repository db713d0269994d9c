# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-frame kernel: blend per-triangle rotation angles and
log-stretches with key-view weights and rebuild the 2x2 affine per triangle.

Single fused pass per triangle; the numpy fallback in ``kernels.py`` computes
the same closed form vectorized.
"""

import numpy as np

from libc.math cimport cos, sin, exp, sqrt, cosh, sinh


def blend_triangle_transforms(const double[:, ::1] angles,
                              const double[:, :, ::1] stretch_logs,
                              const double[::1] weights):
    """angles: (K, m) rotation angles; stretch_logs: (K, m, 3) packed
    symmetric [xx, xy, yy]; weights: (K,).  Returns (m, 2, 2) affines
    R(sum w*theta) @ exp(sum w*logS)."""
    cdef Py_ssize_t nkeys = angles.shape[0]
    cdef Py_ssize_t ntris = angles.shape[1]
    out_arr = np.empty((ntris, 2, 2), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t j, f
    cdef double w, th, la, lb, lc
    cdef double mean, diff, rad, ea, ch, k, s00, s01, s11, c, s
    for f in range(ntris):
        th = 0.0
        la = 0.0
        lb = 0.0
        lc = 0.0
        for j in range(nkeys):
            w = weights[j]
            th += w * angles[j, f]
            la += w * stretch_logs[j, f, 0]
            lb += w * stretch_logs[j, f, 1]
            lc += w * stretch_logs[j, f, 2]
        # exp of symmetric [[la, lb], [lb, lc]]: split into mean*I + traceless
        mean = 0.5 * (la + lc)
        diff = 0.5 * (la - lc)
        rad = sqrt(diff * diff + lb * lb)
        ea = exp(mean)
        if rad > 1e-30:
            ch = cosh(rad)
            k = sinh(rad) / rad
        else:
            ch = 1.0
            k = 1.0
        s00 = ea * (ch + k * diff)
        s11 = ea * (ch - k * diff)
        s01 = ea * k * lb
        c = cos(th)
        s = sin(th)
        out[f, 0, 0] = c * s00 - s * s01
        out[f, 0, 1] = c * s01 - s * s11
        out[f, 1, 0] = s * s00 + c * s01
        out[f, 1, 1] = s * s01 + c * s11
    return out_arr
