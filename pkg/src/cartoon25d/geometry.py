"""Small exact linear-algebra core: rotations, orthographic projection,
2x2 polar decomposition and symmetric matrix log/exp.

Conventions (documented once, relied on everywhere):

* World points are multiplied by the view rotation and orthographically
  projected by dropping z.  After rotation, +z points toward the camera, so
  a larger z means "closer"; the painter's algorithm draws ascending depth.
* Euler composition is ``R = Rz(roll) @ Rx(pitch) @ Ry(yaw)`` with angles in
  degrees.  The front view is (0, 0, 0) = identity; yaw 90 is the right view.

Vectors and matrices are plain float64 numpy arrays; ``ViewRotation`` is the
one validated wrapper because orthonormality is a model invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonOrthonormalView, NotPositiveDefinite, ReflectionError

ORTHONORMAL_TOL = 1e-9
EIGENVALUE_FLOOR = 1e-12


def _as_matrix3(m) -> np.ndarray:
    a = np.asarray(m, dtype=float)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class ViewRotation:
    """A camera rotation: orthonormal 3x3 matrix with det +1.

    ``euler`` keeps the (yaw, pitch, roll) degrees the rotation was built
    from, for UI display only; it is never trusted for math.
    """

    matrix: np.ndarray
    euler: tuple[float, float, float] | None = None

    def __post_init__(self):
        m = _as_matrix3(self.matrix).copy()
        if not np.isfinite(m).all():
            raise NonOrthonormalView("view matrix has non-finite entries")
        if np.abs(m.T @ m - np.eye(3)).max() > ORTHONORMAL_TOL:
            raise NonOrthonormalView("view matrix is not orthonormal")
        if abs(np.linalg.det(m) - 1.0) > ORTHONORMAL_TOL:
            raise NonOrthonormalView("view matrix is not a proper rotation (det != +1)")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_euler(cls, yaw: float, pitch: float, roll: float) -> "ViewRotation":
        return rotation_from_euler(yaw, pitch, roll)

    def euler_angles(self) -> tuple[float, float, float]:
        """Extract (yaw, pitch, roll) degrees under this module's convention.

        At gimbal lock (|pitch| = 90) roll is folded into yaw and reported
        as zero.
        """
        m = self.matrix
        sp = min(1.0, max(-1.0, m[2, 1]))
        pitch = math.asin(sp)
        cp = math.cos(pitch)
        if cp > 1e-12:
            yaw = math.atan2(-m[2, 0], m[2, 2])
            roll = math.atan2(-m[0, 1], m[1, 1])
        else:
            yaw = math.atan2(m[0, 2], m[0, 0])
            roll = 0.0
        return (math.degrees(yaw), math.degrees(pitch), math.degrees(roll))

    def is_close(self, other: "ViewRotation", tol: float = ORTHONORMAL_TOL) -> bool:
        return frobenius_distance(self.matrix, other.matrix) < tol


def rotation_from_euler(yaw: float, pitch: float, roll: float) -> ViewRotation:
    """Build the view rotation Rz(roll) @ Rx(pitch) @ Ry(yaw), degrees."""
    for name, a in (("yaw", yaw), ("pitch", pitch), ("roll", roll)):
        if not math.isfinite(a):
            raise ValueError(f"{name} angle must be finite, got {a!r}")
    y, p, r = (math.radians(a) for a in (yaw, pitch, roll))
    cy, sy = math.cos(y), math.sin(y)
    cp, sp = math.cos(p), math.sin(p)
    cr, sr = math.cos(r), math.sin(r)
    m = np.array([
        [cr * cy - sr * sp * sy, -sr * cp, cr * sy + sr * sp * cy],
        [sr * cy + cr * sp * sy, cr * cp, sr * sy - cr * sp * cy],
        [-cp * sy, sp, cp * cy],
    ])
    return ViewRotation(m, euler=(float(yaw), float(pitch), float(roll)))


IDENTITY_VIEW = rotation_from_euler(0.0, 0.0, 0.0)


def project(p) -> np.ndarray:
    """Orthographic projection: drop the z component."""
    a = np.asarray(p, dtype=float)
    return a[..., :2].copy()


def frobenius_distance(a, b) -> float:
    """sqrt of summed squared entrywise differences; accepts ViewRotation
    objects or raw matrices."""
    ma = a.matrix if isinstance(a, ViewRotation) else np.asarray(a, dtype=float)
    mb = b.matrix if isinstance(b, ViewRotation) else np.asarray(b, dtype=float)
    return float(np.linalg.norm(ma - mb))


def polar_decompose_2x2(a) -> tuple[np.ndarray, np.ndarray]:
    """Split A (det > 0) into rotation R and symmetric positive-definite S
    with A = R @ S.

    Closed form, no iteration: R = [[a+d, b-c], [c-b, a+d]] normalized.
    """
    m = np.asarray(a, dtype=float)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if not det > 0:
        raise ReflectionError(f"determinant {det} is not positive")
    t = m[0, 0] + m[1, 1]
    u = m[0, 1] - m[1, 0]
    n = math.hypot(t, u)
    r = np.array([[t, u], [-u, t]]) / n
    s = r.T @ m
    s = 0.5 * (s + s.T)
    return r, s


def rotation_angle_2x2(a) -> float:
    """Rotation angle in (-pi, pi] of the polar factor of a det>0 2x2 map."""
    m = np.asarray(a, dtype=float)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if not det > 0:
        raise ReflectionError(f"determinant {det} is not positive")
    return math.atan2(m[1, 0] - m[0, 1], m[0, 0] + m[1, 1])


def rotation_2x2(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def sym_log(s) -> np.ndarray:
    """Matrix logarithm of a symmetric positive-definite matrix via
    eigendecomposition."""
    m = np.asarray(s, dtype=float)
    w, q = np.linalg.eigh(0.5 * (m + m.T))
    if np.any(w <= EIGENVALUE_FLOOR):
        raise NotPositiveDefinite(f"eigenvalue {w.min()} at or below {EIGENVALUE_FLOOR}")
    return (q * np.log(w)) @ q.T


def sym_exp(s) -> np.ndarray:
    """Matrix exponential of a symmetric matrix via eigendecomposition."""
    m = np.asarray(s, dtype=float)
    w, q = np.linalg.eigh(0.5 * (m + m.T))
    return (q * np.exp(w)) @ q.T
