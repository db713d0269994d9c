"""Shared builders for synthetic layered models.

Two families: ``consistent_model`` authors every anchor as the true
projection of a hidden 3D point (zero distortions by construction), while
``random_model`` perturbs anchors and varies per-view shapes, colors, and
optional depth overrides — random but always valid.
"""

from __future__ import annotations

import numpy as np
import pytest

from cartoon25d import (KeyViewRecord, Model25, PartTopology, PartView,
                        ViewRotation, rotation_from_euler, solve_model)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)


def ngon(n: int = 6, radius: float = 1.0, phase: float = 0.0,
         center=(0.0, 0.0)):
    """Fan-triangulated regular polygon: one center vertex plus n on a ring;
    all signed areas positive for any radius > 0."""
    ang = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False) + phase
    ring = np.column_stack([radius * np.cos(ang), radius * np.sin(ang)])
    verts = np.vstack([np.zeros(2), ring]) + np.asarray(center, dtype=float)
    tris = np.array([[0, 1 + i, 1 + (i + 1) % n] for i in range(n)])
    return verts, tris


def make_part(part_id: str = "part", n: int = 6, radius: float = 1.0):
    verts, tris = ngon(n, radius)
    topo = PartTopology(part_id=part_id, vertex_count=len(verts),
                        triangles=tris)
    return topo, verts


def random_rotations(rng: np.random.Generator, count: int,
                     spread: float = 160.0) -> list[ViewRotation]:
    """Distinct rotations drawn from a yaw/pitch/roll box."""
    views: list[ViewRotation] = []
    while len(views) < count:
        yaw, pitch, roll = rng.uniform(-spread / 2, spread / 2, size=3)
        v = rotation_from_euler(yaw, pitch, roll)
        if all(np.linalg.norm(v.matrix - u.matrix) > 1e-3 for u in views):
            views.append(v)
    return views


def _build(points3d, part_sides, views, anchor_noise, rng,
           vary_shapes: bool, depth_override: bool, solved: bool) -> Model25:
    nparts = len(points3d)
    topos, base_verts = [], []
    for i, n in enumerate(part_sides):
        topo, verts = make_part(f"part{i}", n=n, radius=0.5 + 0.5 * (i + 1) / nparts)
        topos.append(topo)
        base_verts.append(verts)
    override_parts = ([i for i in range(nparts) if rng.random() < 0.5]
                      if depth_override else [])
    records = []
    for v in views:
        pvs = []
        for i in range(nparts):
            anchor = (v.matrix @ points3d[i])[:2]
            if anchor_noise:
                anchor = anchor + rng.uniform(-anchor_noise, anchor_noise, 2)
            if vary_shapes:
                verts, _ = ngon(part_sides[i],
                                radius=rng.uniform(0.5, 1.5),
                                phase=rng.uniform(0, 2 * np.pi))
            else:
                verts = base_verts[i]
            pvs.append(PartView(
                anchor=anchor, vertices=verts, color=rng.uniform(0, 1, 4),
                depth_override=(float(rng.uniform(-2, 2))
                                if i in override_parts else None)))
        records.append(KeyViewRecord(view=v, parts=tuple(pvs)))
    m = Model25(parts=tuple(topos), key_views=tuple(records))
    return solve_model(m) if solved else m


def consistent_model(rng: np.random.Generator, nparts: int = 3,
                     nviews: int = 3, solved: bool = True) -> Model25:
    """Anchors are exact projections of hidden 3D points; one shared shape
    per part across views; zero distortions after solving."""
    points3d = rng.uniform(-3, 3, (nparts, 3))
    sides = rng.integers(4, 9, nparts)
    views = random_rotations(rng, nviews)
    return _build(points3d, sides, views, 0.0, rng,
                  vary_shapes=False, depth_override=False, solved=solved)


def random_model(rng: np.random.Generator, nparts: int = 3, nviews: int = 3,
                 distortion: float = 0.3, solved: bool = True,
                 depth_override: bool = False) -> Model25:
    """Valid but messy: perturbed anchors (nonzero distortions), per-view
    shape variation, random colors, optional per-part depth overrides."""
    points3d = rng.uniform(-3, 3, (nparts, 3))
    sides = rng.integers(4, 9, nparts)
    views = random_rotations(rng, nviews)
    return _build(points3d, sides, views, distortion, rng,
                  vary_shapes=True, depth_override=depth_override,
                  solved=solved)


def centered(vertices: np.ndarray) -> np.ndarray:
    """Shape with its vertex mean at the origin (translation-free compare)."""
    v = np.asarray(vertices, dtype=float)
    return v - v.mean(axis=0)
