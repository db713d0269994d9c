"""As-rigid-as-possible N-way shape interpolation.

Per triangle, the map from the reference key view to each other key view is a
2x2 affine, split by polar decomposition into a rotation angle and a
log-stretch.  Blending sums angles and log-stretches with the view weights
and re-composes (endpoints reproduce exactly; a sum of rotation matrices
would not stay a rotation).  The blended per-triangle affines are then
assembled into vertex positions by a linear least squares whose normal matrix
depends only on the reference shape, so it is factorized once per model and
each frame costs two triangular solves per part.

Angles are taken in (-pi, pi] per view independently; a morph needing more
than 180 degrees of triangle rotation between adjacent key views must add an
intermediate key view.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import DegenerateTriangle, NotPositiveDefinite, ReflectionError, SingularSystem
from .geometry import rotation_2x2, sym_exp
from .model import Model25, PartTopology, area_weighted_centroid, signed_areas

MIN_REFERENCE_AREA = 1e-9


@dataclass(frozen=True, eq=False)
class TriangleTransform:
    """Reference-to-key-view map of one triangle: affine = R(angle) @ exp(stretch_log)."""

    triangle: int
    affine: np.ndarray       # (2, 2)
    angle: float             # rotation angle in (-pi, pi]
    stretch_log: np.ndarray  # (2, 2) symmetric

    def rebuilt(self) -> np.ndarray:
        return rotation_2x2(self.angle) @ sym_exp(self.stretch_log)


def _edge_matrices(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """(m, 2, 2) matrices with columns [p1 - p0, p2 - p0]."""
    p0 = vertices[triangles[:, 0]]
    e1 = vertices[triangles[:, 1]] - p0
    e2 = vertices[triangles[:, 2]] - p0
    return np.stack([e1, e2], axis=-1)


def _inv_2x2(m: np.ndarray) -> np.ndarray:
    det = m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]
    out = np.empty_like(m)
    out[:, 0, 0] = m[:, 1, 1]
    out[:, 0, 1] = -m[:, 0, 1]
    out[:, 1, 0] = -m[:, 1, 0]
    out[:, 1, 1] = m[:, 0, 0]
    return out / det[:, None, None]


def extract_transform_arrays(triangles: np.ndarray, ref_vertices: np.ndarray,
                             view_vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized extraction: per-triangle (angles (m,), packed logs (m, 3)).

    Packed symmetric order is [xx, xy, yy].
    """
    ref_edges = _edge_matrices(ref_vertices, triangles)
    ref_areas = 0.5 * (ref_edges[:, 0, 0] * ref_edges[:, 1, 1]
                       - ref_edges[:, 1, 0] * ref_edges[:, 0, 1])
    if ref_areas.min() < MIN_REFERENCE_AREA:
        f = int(np.argmin(ref_areas))
        raise DegenerateTriangle(f"reference triangle {f} has area {ref_areas[f]:.3g}")
    affines = np.einsum("fij,fjk->fik", _edge_matrices(view_vertices, triangles),
                        _inv_2x2(ref_edges))
    return decompose_affines(affines)


def decompose_affines(affines: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polar-split a batch of det>0 2x2 maps into angles and packed log-stretches."""
    a, b = affines[:, 0, 0], affines[:, 0, 1]
    c, d = affines[:, 1, 0], affines[:, 1, 1]
    dets = a * d - b * c
    if np.any(dets <= 0):
        f = int(np.argmax(dets <= 0))
        raise ReflectionError(f"triangle {f} map has determinant {dets[f]:.3g}")
    angles = np.arctan2(c - b, a + d)
    cos_t = np.cos(angles)
    sin_t = np.sin(angles)
    # S = R(-angle) @ A, symmetrized
    s00 = cos_t * a + sin_t * c
    s11 = -sin_t * b + cos_t * d
    s01 = 0.5 * ((cos_t * b + sin_t * d) + (-sin_t * a + cos_t * c))
    mean = 0.5 * (s00 + s11)
    diff = 0.5 * (s00 - s11)
    rad = np.hypot(diff, s01)
    lo = mean - rad
    if np.any(lo <= 1e-12):
        f = int(np.argmax(lo <= 1e-12))
        raise NotPositiveDefinite(f"triangle {f} stretch eigenvalue {lo[f]:.3g}")
    hi = mean + rad
    log_mean = 0.5 * np.log(hi * lo)
    safe = np.where(rad > 1e-12, rad, 1.0)
    k = np.where(rad > 1e-12, 0.5 * np.log(hi / lo) / safe, 1.0 / mean)
    logs = np.empty((affines.shape[0], 3))
    logs[:, 0] = log_mean + k * diff
    logs[:, 1] = k * s01
    logs[:, 2] = log_mean - k * diff
    return angles, logs


def extract_transforms(topology: PartTopology, ref_vertices: np.ndarray,
                       view_vertices: np.ndarray) -> list[TriangleTransform]:
    """Per-triangle reference-to-view transforms as inspectable objects."""
    tri = topology.triangles
    affines = np.einsum("fij,fjk->fik", _edge_matrices(view_vertices, tri),
                        _inv_2x2(_edge_matrices(ref_vertices, tri)))
    angles, logs = extract_transform_arrays(tri, ref_vertices, view_vertices)
    return [
        TriangleTransform(
            triangle=f,
            affine=affines[f],
            angle=float(angles[f]),
            stretch_log=np.array([[logs[f, 0], logs[f, 1]], [logs[f, 1], logs[f, 2]]]),
        )
        for f in range(tri.shape[0])
    ]


def blend_local(transforms_per_view: list[list[TriangleTransform]],
                weights: np.ndarray) -> np.ndarray:
    """Blend per-view triangle transforms into one (m, 2, 2) affine field."""
    angles = np.array([[t.angle for t in view] for view in transforms_per_view])
    logs = np.array([
        [[t.stretch_log[0, 0], t.stretch_log[0, 1], t.stretch_log[1, 1]] for t in view]
        for view in transforms_per_view
    ])
    return kernels.blend_triangle_transforms(angles, logs, np.asarray(weights, dtype=float))


class _AssemblySystem:
    """Prefactorized least squares mapping blended affines to vertex positions.

    Rows (two per triangle and coordinate) express the affine induced on each
    triangle relative to the reference shape; terms are weighted by reference
    area unless ``unweighted`` asks for the plain sum.  The translation null
    space is removed by pinning vertex 0, and solutions are recentered onto
    the caller's target anchor afterwards.
    """

    def __init__(self, topology: PartTopology, ref_vertices: np.ndarray,
                 *, unweighted: bool = False):
        tri = topology.triangles
        n = topology.vertex_count
        m = tri.shape[0]
        self.triangles = tri
        self.part_id = topology.part_id

        adjacency = sparse.coo_matrix(
            (np.ones(3 * m), (tri.ravel(), np.roll(tri, 1, axis=1).ravel())),
            shape=(n, n))
        ncomp, _ = connected_components(adjacency, directed=False)
        if ncomp != 1:
            raise SingularSystem(
                f"part {topology.part_id!r} triangulation is not connected "
                f"({ncomp} components)")

        ref_edges = _edge_matrices(ref_vertices, tri)
        areas = 0.5 * (ref_edges[:, 0, 0] * ref_edges[:, 1, 1]
                       - ref_edges[:, 1, 0] * ref_edges[:, 0, 1])
        if areas.min() < MIN_REFERENCE_AREA:
            raise SingularSystem(
                f"part {topology.part_id!r} has a zero-area reference triangle")
        grads = _inv_2x2(ref_edges)
        omega = np.ones(m) if unweighted else areas

        # row (2f + c): coefficient grads[f,0,c] on v1, grads[f,1,c] on v2,
        # minus their sum on v0
        rows = np.repeat(np.arange(2 * m), 3)
        cols = np.repeat(tri[:, None, :], 2, axis=1).reshape(-1)
        vals = np.stack([-(grads[:, 0, :] + grads[:, 1, :]),
                         grads[:, 0, :], grads[:, 1, :]], axis=2)  # (m, 2, 3)
        coeff = sparse.csr_matrix((vals.reshape(-1), (rows, cols)), shape=(2 * m, n))
        weighted = coeff.T.multiply(np.repeat(omega, 2)[None, :]).tocsr()
        normal = (weighted @ coeff).toarray()
        try:
            self._factor = cho_factor(normal[1:, 1:])
        except LinAlgError as exc:
            raise SingularSystem(
                f"part {topology.part_id!r} assembly matrix is singular") from exc
        self._rhs_map = weighted

    def solve(self, affines: np.ndarray, target_anchor: np.ndarray) -> np.ndarray:
        n = self._rhs_map.shape[0]
        out = np.empty((n, 2))
        for axis in range(2):
            b = self._rhs_map @ affines[:, axis, :].ravel()
            out[0, axis] = 0.0
            out[1:, axis] = cho_solve(self._factor, b[1:])
        out += np.asarray(target_anchor, dtype=float) - area_weighted_centroid(
            out, self.triangles)
        return out


def assemble_shape(topology: PartTopology, ref_vertices: np.ndarray,
                   affines: np.ndarray, target_anchor: np.ndarray,
                   *, unweighted: bool = False) -> np.ndarray:
    """One-shot assembly (builds and factorizes the system; use ArapCache to
    amortize that over many frames)."""
    system = _AssemblySystem(topology, np.asarray(ref_vertices, dtype=float),
                             unweighted=unweighted)
    return system.solve(np.asarray(affines, dtype=float),
                        np.asarray(target_anchor, dtype=float))


class ArapCache:
    """Per-model precomputation: per-part assembly factorizations and
    per-key-view triangle decompositions."""

    def __init__(self, systems, angles, logs):
        self._systems = systems
        self._angles = angles  # per part: (K, m)
        self._logs = logs      # per part: (K, m, 3)

    @classmethod
    def build(cls, m: Model25, *, unweighted: bool = False) -> "ArapCache":
        if m.reference_view_index is None:
            raise ValueError("model has no reference view (solve it first)")
        ref = m.reference_view_index
        systems = []
        angles = []
        logs = []
        for i, topo in enumerate(m.parts):
            ref_vertices = m.key_views[ref].parts[i].vertices
            systems.append(_AssemblySystem(topo, ref_vertices, unweighted=unweighted))
            nt = topo.triangles.shape[0]
            part_angles = np.zeros((len(m.key_views), nt))
            part_logs = np.zeros((len(m.key_views), nt, 3))
            for j, rec in enumerate(m.key_views):
                if j == ref:
                    continue  # reference-to-reference is the identity, exactly
                part_angles[j], part_logs[j] = extract_transform_arrays(
                    topo.triangles, ref_vertices, rec.parts[i].vertices)
            angles.append(part_angles)
            logs.append(part_logs)
        return cls(systems, angles, logs)

    def blend_affines(self, part_index: int, weights: np.ndarray) -> np.ndarray:
        return kernels.blend_triangle_transforms(
            self._angles[part_index], self._logs[part_index],
            np.asarray(weights, dtype=float))

    def interpolate_shape(self, part_index: int, weights: np.ndarray,
                          target_anchor: np.ndarray) -> np.ndarray:
        affines = self.blend_affines(part_index, weights)
        return self._systems[part_index].solve(affines, target_anchor)


def interpolate_shape(cache: ArapCache, part_index: int, weights: np.ndarray,
                      target_anchor: np.ndarray) -> np.ndarray:
    """Blend per-triangle transforms at these weights and assemble vertex
    positions, recentered on the target anchor."""
    return cache.interpolate_shape(part_index, weights, target_anchor)
