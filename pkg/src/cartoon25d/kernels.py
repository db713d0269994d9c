"""Kernel dispatch: the Cython extension when built, numpy otherwise.

Set ``CARTOON25D_PURE=1`` to force the numpy path (used by the equivalence
tests and the benchmark).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from . import _kernels as _compiled
except ImportError:  # running from a source tree without build_ext
    _compiled = None

HAVE_COMPILED = _compiled is not None
USE_COMPILED = HAVE_COMPILED and os.environ.get("CARTOON25D_PURE") != "1"


def blend_triangle_transforms_pure(angles: np.ndarray, stretch_logs: np.ndarray,
                                   weights: np.ndarray) -> np.ndarray:
    """Vectorized fallback for the compiled kernel; same closed form.

    angles (K, m), stretch_logs (K, m, 3) packed symmetric [xx, xy, yy],
    weights (K,) -> (m, 2, 2) affines R(sum w*theta) @ exp(sum w*logS).
    """
    th = weights @ angles
    packed = np.tensordot(weights, stretch_logs, axes=1)
    la, lb, lc = packed[:, 0], packed[:, 1], packed[:, 2]
    mean = 0.5 * (la + lc)
    diff = 0.5 * (la - lc)
    rad = np.hypot(diff, lb)
    ea = np.exp(mean)
    safe = np.where(rad > 1e-30, rad, 1.0)
    k = np.where(rad > 1e-30, np.sinh(safe) / safe, 1.0)
    ch = np.cosh(rad)
    s00 = ea * (ch + k * diff)
    s11 = ea * (ch - k * diff)
    s01 = ea * k * lb
    c, s = np.cos(th), np.sin(th)
    out = np.empty((angles.shape[1], 2, 2))
    out[:, 0, 0] = c * s00 - s * s01
    out[:, 0, 1] = c * s01 - s * s11
    out[:, 1, 0] = s * s00 + c * s01
    out[:, 1, 1] = s * s01 + c * s11
    return out


def blend_triangle_transforms(angles: np.ndarray, stretch_logs: np.ndarray,
                              weights: np.ndarray) -> np.ndarray:
    if USE_COMPILED:
        return _compiled.blend_triangle_transforms(
            np.ascontiguousarray(angles),
            np.ascontiguousarray(stretch_logs),
            np.ascontiguousarray(weights),
        )
    return blend_triangle_transforms_pure(angles, stretch_logs, weights)
