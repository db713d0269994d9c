"""Comparison methods: anchor interpolation without the distortion mechanism
and prior-style weight schemes.

The alternative weight schemes are deliberate simplifications of the systems
they stand in for (kNN over a yaw/pitch grid instead of a Delaunay
triangulation of the angle space; inverse camera-position distance instead of
a spherical convex hull).  What matters for the comparison is what they share
with the originals: none of them can see camera roll, so a roll-only key set
either defeats them outright or collapses to a uniform blend.
"""

from __future__ import annotations

import enum
import math
import warnings

import numpy as np

from .blend import WeightVector
from .errors import DegenerateConfiguration, UnsolvedModel
from .geometry import ViewRotation
from .model import Model25

KNN_K = 3
EXACT_EPSILON = 1e-9


class AnchorMethod(enum.Enum):
    VDD = "vdd"
    NO_VDD = "no-vdd"
    PURE_2D = "pure-2d"


class WeightMethod(enum.Enum):
    FROBENIUS_VDD = "frobenius-vdd"
    YAW_PITCH_KNN = "yaw-pitch-knn"
    POSITION_DISTANCE = "position-distance"
    RAY_ANGLE = "ray-angle"


def anchor_pure2d(m: Model25, part_index: int, w: WeightVector) -> np.ndarray:
    """Convex combination of the authored 2D anchors; no 3D term at all."""
    anchors = np.array([rec.parts[part_index].anchor for rec in m.key_views])
    return w.values @ anchors


def anchor_no_vdd(m: Model25, part_index: int, cur: ViewRotation) -> np.ndarray:
    """Projection of the triangulated 3D anchor, ignoring the distortions."""
    if m.solved is None:
        raise UnsolvedModel("solve the model before blending")
    return (cur.matrix @ m.solved[part_index].anchor3d)[:2].copy()


def _yaw_pitch(view: ViewRotation) -> tuple[float, float]:
    yaw, pitch, _ = view.euler_angles()
    return yaw, pitch


def _wrapped_deg(a: float, b: float) -> float:
    return (a - b + 180.0) % 360.0 - 180.0


def _camera_position(view: ViewRotation) -> np.ndarray:
    # camera sits on +z of the rotated frame; world position is R^T (0,0,1)
    return view.matrix.T @ np.array([0.0, 0.0, 1.0])


def _share_among_matches(matches: np.ndarray, method: WeightMethod,
                         allow_ties: bool) -> WeightVector:
    count = int(matches.sum())
    if count > 1 and not allow_ties:
        raise DegenerateConfiguration(
            f"{method.value}: {count} key views are indistinguishable at this view")
    if count > 1:
        warnings.warn(
            f"{method.value}: {count} key views are indistinguishable; "
            "blending them equally", stacklevel=3)
    v = matches.astype(float)
    return WeightVector(v / v.sum())


def weights_alternative(method: WeightMethod, cur: ViewRotation,
                        keys: list[ViewRotation]) -> WeightVector:
    """Weights under a prior-style scheme; raises DegenerateConfiguration when
    the scheme's parameterization cannot tell the key views apart."""
    if not keys:
        raise ValueError("need at least one key view")
    if method is WeightMethod.FROBENIUS_VDD:
        from .blend import compute_weights
        return compute_weights(cur, keys)

    nkeys = len(keys)
    if method is WeightMethod.YAW_PITCH_KNN:
        cy, cp = _yaw_pitch(cur)
        dists = np.array([
            math.hypot(_wrapped_deg(cy, ky), _wrapped_deg(cp, kp))
            for ky, kp in (_yaw_pitch(k) for k in keys)
        ])
        matches = dists < EXACT_EPSILON
        if matches.any():
            return _share_among_matches(matches, method, allow_ties=False)
        order = np.argsort(dists, kind="stable")[:min(KNN_K, nkeys)]
        v = np.zeros(nkeys)
        v[order] = 1.0 / dists[order]
        return WeightVector(v / v.sum())

    if method is WeightMethod.POSITION_DISTANCE:
        cpos = _camera_position(cur)
        dists = np.array([float(np.linalg.norm(cpos - _camera_position(k)))
                          for k in keys])
        matches = dists < EXACT_EPSILON
        if matches.any():
            return _share_among_matches(matches, method, allow_ties=False)
        inv = 1.0 / dists
        return WeightVector(inv / inv.sum())

    if method is WeightMethod.RAY_ANGLE:
        cpos = _camera_position(cur)
        angles = np.array([
            math.acos(min(1.0, max(-1.0, float(cpos @ _camera_position(k)))))
            for k in keys
        ])
        matches = angles < EXACT_EPSILON
        if matches.any():
            # this scheme blends coincident views equally rather than failing
            return _share_among_matches(matches, method, allow_ties=True)
        inv = 1.0 / angles
        return WeightVector(inv / inv.sum())

    raise ValueError(f"unknown weight method {method!r}")
