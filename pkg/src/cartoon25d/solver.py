"""Anchor solving: recover each part's 3D anchor from its 2D anchors across
key views (linear least squares over orthographic projections), then record
the per-view 2D residual as that view's distortion.

The normal equations are 3x3 and solved with a hermitian pseudo-inverse, so a
rank-deficient configuration (single view, or all views sharing a projection
null direction) yields the minimum-norm solution: the unconstrained depth
component is set to zero, which reproduces the single-view rule.
"""

from __future__ import annotations

import numpy as np

from .geometry import ViewRotation, project
from .model import Model25, SolvedPart, default_reference_view_index

RANK_TOL = 1e-9


def triangulate_anchor(observations: list[tuple[ViewRotation, np.ndarray]]) -> np.ndarray:
    """Least-squares 3D point from (rotation, projected 2D anchor) pairs.

    Minimizes sum_j ||a_j - P_j v||^2 with P_j the top two rows of R_j.
    """
    if not observations:
        raise ValueError("need at least one observation")
    ata = np.zeros((3, 3))
    atb = np.zeros(3)
    for view, anchor2d in observations:
        p = view.matrix[:2, :]
        a = np.reshape(np.asarray(anchor2d, dtype=float), (2,))
        ata += p.T @ p
        atb += p.T @ a
    w, q = np.linalg.eigh(ata)
    inv_w = np.where(w > RANK_TOL * max(w[-1], 1.0), 1.0 / np.where(w == 0.0, 1.0, w), 0.0)
    return (q * inv_w) @ (q.T @ atb)


def anchor_residual(anchor3d: np.ndarray,
                    observations: list[tuple[ViewRotation, np.ndarray]]) -> float:
    """Objective value sqrt(sum_j ||a_j - P_j v||^2) at a candidate anchor."""
    total = 0.0
    for view, anchor2d in observations:
        r = np.asarray(anchor2d, dtype=float) - project(view.matrix @ anchor3d)
        total += float(r @ r)
    return float(np.sqrt(total))


def solve_model(m: Model25) -> Model25:
    """Fill the solved block: per-part 3D anchor and per-key-view distortions.

    With a single key view the anchor depth and all distortions are zero by
    definition; with more views the distortion is the exact per-view residual,
    so projecting the anchor and adding the distortion reproduces the authored
    2D anchor bit-for-bit.
    """
    if not m.key_views:
        raise ValueError("model has no key views")
    solved = []
    for i in range(len(m.parts)):
        observations = [(rec.view, rec.parts[i].anchor) for rec in m.key_views]
        if len(m.key_views) == 1:
            a = observations[0][1]
            anchor3d = np.array([a[0], a[1], 0.0])
            distortions = np.zeros((1, 2))
        else:
            anchor3d = triangulate_anchor(observations)
            distortions = np.array([
                anchor2d - project(view.matrix @ anchor3d)
                for view, anchor2d in observations
            ])
        solved.append(SolvedPart(anchor3d=anchor3d, distortions=distortions))
    ref = m.reference_view_index
    if ref is None:
        ref = default_reference_view_index(m.key_views)
    return Model25(parts=m.parts, key_views=m.key_views, solved=tuple(solved),
                   reference_view_index=ref)
