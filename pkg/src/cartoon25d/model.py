"""Domain model for layered parts, key views and solved 2.5D models, plus the
JSON document format shared by CLI, service and UI.

All model objects are immutable values; mutating operations return a new
model with the solved block dropped (it must be recomputed).

Document format (format_version 1)::

    {
      "format_version": 1,
      "parts": [{"part_id": str, "vertex_count": int, "triangles": [[i,j,k]..]}],
      "key_views": [
        {"view": {"yaw": deg, "pitch": deg, "roll": deg},
         "parts": {part_id: {"anchor": [x,y], "vertices": [[x,y]..],
                              "color": [r,g,b,a], "depth_override": num?}}}
      ],
      "solved": {part_id: {"anchor3d": [x,y,z], "distortions": [[dx,dy]..]}}?,
      "reference_view_index": int?
    }

A view object may carry an explicit "matrix" (row-major 3x3) instead of being
rebuilt from the Euler triple; it is validated for orthonormality.  Numbers
are written with 17 significant digits so load(save(m)) is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jsonio
from .errors import (
    DegenerateTriangle,
    DuplicateKeyView,
    EmptyModel,
    NonOrthonormalView,
    ParseError,
    ValidationError,
    VertexCountMismatch,
)
from .geometry import ViewRotation, rotation_from_euler

FORMAT_VERSION = 1
MIN_TRIANGLE_AREA = 1e-9
DUPLICATE_VIEW_TOL = 1e-9


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


def signed_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Signed area of each triangle (positive = counter-clockwise)."""
    p0 = vertices[triangles[:, 0]]
    e1 = vertices[triangles[:, 1]] - p0
    e2 = vertices[triangles[:, 2]] - p0
    return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def area_weighted_centroid(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Centroid of the triangulated region, weighted by triangle area.

    Falls back to the plain vertex mean if the total area degenerates.
    """
    areas = signed_areas(vertices, triangles)
    total = areas.sum()
    if abs(total) < 1e-12:
        return vertices.mean(axis=0)
    centers = vertices[triangles].mean(axis=1)
    return (areas[:, None] * centers).sum(axis=0) / total


@dataclass(frozen=True, eq=False)
class PartTopology:
    part_id: str
    vertex_count: int
    triangles: np.ndarray  # (m, 3) int

    def __post_init__(self):
        tri = np.ascontiguousarray(self.triangles, dtype=np.intp)
        if tri.ndim != 2 or tri.shape[1] != 3:
            raise ValidationError("triangles must be (i,j,k) triples", part_id=self.part_id)
        if tri.shape[0] == 0:
            raise ValidationError("part has no triangles", part_id=self.part_id)
        if tri.min() < 0 or tri.max() >= self.vertex_count:
            raise ValidationError(
                f"triangle index out of range (vertex_count={self.vertex_count})",
                part_id=self.part_id)
        tri.flags.writeable = False
        object.__setattr__(self, "triangles", tri)


@dataclass(frozen=True, eq=False)
class PartView:
    """One part's authored data at one key view."""

    anchor: np.ndarray          # (2,)
    vertices: np.ndarray        # (n, 2), part-local frame
    color: np.ndarray           # RGBA in [0,1]
    depth_override: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "anchor", _freeze(np.reshape(self.anchor, (2,))))
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValidationError("vertices must be an (n, 2) array")
        object.__setattr__(self, "vertices", _freeze(v))
        c = np.reshape(np.asarray(self.color, dtype=float), (4,))
        if not np.isfinite(c).all() or c.min() < 0.0 or c.max() > 1.0:
            raise ValidationError("color components must lie in [0, 1]")
        object.__setattr__(self, "color", _freeze(c))
        for arr in (self.anchor, self.vertices):
            if not np.isfinite(arr).all():
                raise ValidationError("non-finite coordinate")
        if self.depth_override is not None:
            d = float(self.depth_override)
            if not np.isfinite(d):
                raise ValidationError("depth_override must be finite")
            object.__setattr__(self, "depth_override", d)


@dataclass(frozen=True, eq=False)
class KeyViewRecord:
    view: ViewRotation
    parts: tuple[PartView, ...]  # aligned with Model25.parts

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True, eq=False)
class SolvedPart:
    anchor3d: np.ndarray     # (3,)
    distortions: np.ndarray  # (K, 2), one per key view

    def __post_init__(self):
        object.__setattr__(self, "anchor3d", _freeze(np.reshape(self.anchor3d, (3,))))
        d = np.asarray(self.distortions, dtype=float)
        if d.ndim != 2 or d.shape[1] != 2:
            raise ValidationError("distortions must be a (K, 2) array")
        object.__setattr__(self, "distortions", _freeze(d))


@dataclass(frozen=True, eq=False)
class Model25:
    parts: tuple[PartTopology, ...]
    key_views: tuple[KeyViewRecord, ...]
    solved: tuple[SolvedPart, ...] | None = None
    reference_view_index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "key_views", tuple(self.key_views))
        if self.solved is not None:
            object.__setattr__(self, "solved", tuple(self.solved))
        validate_model(self)

    @property
    def is_solved(self) -> bool:
        return self.solved is not None

    def part_index(self, part_id: str) -> int:
        for i, p in enumerate(self.parts):
            if p.part_id == part_id:
                return i
        raise KeyError(part_id)


@dataclass(frozen=True, eq=False)
class BlendedFrame:
    """One evaluated camera view: per-part polygon, position, depth, color."""

    part_ids: tuple[str, ...]
    positions: np.ndarray   # (P, 2)
    depths: np.ndarray      # (P,)
    colors: np.ndarray      # (P, 4)
    vertices: tuple[np.ndarray, ...]
    draw_order: tuple[int, ...]  # ascending depth, ties by authoring order


def validate_model(m: Model25) -> None:
    ids = [p.part_id for p in m.parts]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate part_id")
    for j, rec in enumerate(m.key_views):
        if len(rec.parts) != len(m.parts):
            raise ValidationError("key view does not cover every part", key_view_index=j)
        for topo, pv in zip(m.parts, rec.parts):
            if pv.vertices.shape[0] != topo.vertex_count:
                raise VertexCountMismatch(
                    f"expected {topo.vertex_count} vertices, got {pv.vertices.shape[0]}",
                    part_id=topo.part_id, key_view_index=j)
            areas = signed_areas(pv.vertices, topo.triangles)
            if areas.min() <= MIN_TRIANGLE_AREA:
                f = int(np.argmin(areas))
                raise DegenerateTriangle(
                    f"triangle {f} has signed area {areas[f]:.3g} (must be > {MIN_TRIANGLE_AREA})",
                    part_id=topo.part_id, key_view_index=j)
    for j in range(len(m.key_views)):
        for k in range(j + 1, len(m.key_views)):
            if m.key_views[j].view.is_close(m.key_views[k].view, DUPLICATE_VIEW_TOL):
                raise DuplicateKeyView(
                    f"key views {j} and {k} coincide", key_view_index=k)
    if m.reference_view_index is not None:
        if not 0 <= m.reference_view_index < len(m.key_views):
            raise ValidationError(
                f"reference_view_index {m.reference_view_index} out of range")
    if m.solved is not None:
        if len(m.solved) != len(m.parts):
            raise ValidationError("solved block does not cover every part")
        nkeys = len(m.key_views)
        for topo, sp in zip(m.parts, m.solved):
            if sp.distortions.shape[0] != nkeys:
                raise ValidationError(
                    "distortion count differs from key view count", part_id=topo.part_id)
            if nkeys == 1:
                if sp.anchor3d[2] != 0.0 or np.any(sp.distortions != 0.0):
                    raise ValidationError(
                        "single-key-view model must have zero depth and distortion",
                        part_id=topo.part_id)


def default_reference_view_index(key_views) -> int:
    """Key view nearest the identity rotation ("front"); ties -> lowest index."""
    eye = np.eye(3)
    dists = [float(np.linalg.norm(rec.view.matrix - eye)) for rec in key_views]
    return int(np.argmin(dists))


def add_key_view(m: Model25, rec: KeyViewRecord) -> Model25:
    for j, existing in enumerate(m.key_views):
        if existing.view.is_close(rec.view, DUPLICATE_VIEW_TOL):
            raise DuplicateKeyView(f"new view duplicates key view {j}", key_view_index=j)
    return Model25(parts=m.parts, key_views=m.key_views + (rec,),
                   solved=None, reference_view_index=None)


def delete_latest_key_view(m: Model25) -> Model25:
    if not m.key_views:
        raise EmptyModel("no key views to delete")
    return Model25(parts=m.parts, key_views=m.key_views[:-1],
                   solved=None, reference_view_index=None)


def replace_part_view(m: Model25, part_id: str, key_view_index: int,
                      new_view: PartView) -> Model25:
    """Swap one part's record in one key view (UI editing path)."""
    if not 0 <= key_view_index < len(m.key_views):
        raise ValidationError(f"key view index {key_view_index} out of range")
    i = m.part_index(part_id)
    rec = m.key_views[key_view_index]
    parts = rec.parts[:i] + (new_view,) + rec.parts[i + 1:]
    views = (m.key_views[:key_view_index]
             + (KeyViewRecord(view=rec.view, parts=parts),)
             + m.key_views[key_view_index + 1:])
    return Model25(parts=m.parts, key_views=views, solved=None,
                   reference_view_index=None)


# ---------------------------------------------------------------------------
# document io

def _require(doc: dict, key: str, kind, where: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing {key!r} in {where}")
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ParseError(f"{where}.{key} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise ParseError(f"{where}.{key} must be {kind.__name__}")
    return value


def _view_from_doc(doc: dict, where: str) -> ViewRotation:
    yaw = _require(doc, "yaw", float, where)
    pitch = _require(doc, "pitch", float, where)
    roll = _require(doc, "roll", float, where)
    if "matrix" in doc:
        m = np.asarray(doc["matrix"], dtype=float)
        if m.shape != (3, 3):
            raise ParseError(f"{where}.matrix must be 3x3")
        return ViewRotation(m, euler=(yaw, pitch, roll))
    try:
        return rotation_from_euler(yaw, pitch, roll)
    except ValueError as exc:
        raise NonOrthonormalView(str(exc)) from exc


def part_view_from_doc(doc: dict, where: str) -> PartView:
    anchor = _require(doc, "anchor", list, where)
    vertices = _require(doc, "vertices", list, where)
    color = _require(doc, "color", list, where)
    try:
        return PartView(
            anchor=np.asarray(anchor, dtype=float),
            vertices=np.asarray(vertices, dtype=float).reshape(-1, 2),
            color=np.asarray(color, dtype=float),
            depth_override=doc.get("depth_override"),
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad geometry in {where}: {exc}") from exc


def key_view_from_doc(doc: dict, parts: tuple[PartTopology, ...],
                      where: str = "key_view") -> KeyViewRecord:
    view = _view_from_doc(_require(doc, "view", dict, where), where + ".view")
    per_part = _require(doc, "parts", dict, where)
    entries = []
    for topo in parts:
        if topo.part_id not in per_part:
            raise ValidationError(f"{where} missing entry", part_id=topo.part_id)
        entries.append(part_view_from_doc(per_part[topo.part_id],
                                           f"{where}.parts[{topo.part_id}]"))
    return KeyViewRecord(view=view, parts=tuple(entries))


def model_from_doc(doc) -> Model25:
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    version = _require(doc, "format_version", int, "document")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version}")
    parts = []
    for i, pdoc in enumerate(_require(doc, "parts", list, "document")):
        where = f"parts[{i}]"
        parts.append(PartTopology(
            part_id=_require(pdoc, "part_id", str, where),
            vertex_count=_require(pdoc, "vertex_count", int, where),
            triangles=np.asarray(_require(pdoc, "triangles", list, where), dtype=np.intp),
        ))
    parts = tuple(parts)
    key_views = tuple(
        key_view_from_doc(kdoc, parts, f"key_views[{j}]")
        for j, kdoc in enumerate(_require(doc, "key_views", list, "document"))
    )
    solved = None
    if doc.get("solved") is not None:
        sdoc = doc["solved"]
        if not isinstance(sdoc, dict):
            raise ParseError("solved block must be an object")
        solved = []
        for topo in parts:
            if topo.part_id not in sdoc:
                raise ValidationError("solved block missing part", part_id=topo.part_id)
            entry = sdoc[topo.part_id]
            solved.append(SolvedPart(
                anchor3d=np.asarray(_require(entry, "anchor3d", list, "solved"), dtype=float),
                distortions=np.asarray(
                    _require(entry, "distortions", list, "solved"), dtype=float).reshape(-1, 2),
            ))
        solved = tuple(solved)
    ref = doc.get("reference_view_index")
    if ref is not None and not isinstance(ref, int):
        raise ParseError("reference_view_index must be an integer")
    return Model25(parts=parts, key_views=key_views, solved=solved,
                   reference_view_index=ref)


def load_model(data: bytes | str) -> Model25:
    return model_from_doc(jsonio.loads(data))


def _euler_doc(view: ViewRotation) -> dict:
    yaw, pitch, roll = view.euler if view.euler is not None else view.euler_angles()
    doc = {"yaw": float(yaw), "pitch": float(pitch), "roll": float(roll)}
    rebuilt = rotation_from_euler(yaw, pitch, roll)
    if not np.array_equal(rebuilt.matrix, view.matrix):
        doc["matrix"] = [[float(x) for x in row] for row in view.matrix]
    return doc


def part_view_to_doc(pv: PartView) -> dict:
    doc = {
        "anchor": [float(x) for x in pv.anchor],
        "vertices": [[float(x), float(y)] for x, y in pv.vertices],
        "color": [float(c) for c in pv.color],
    }
    if pv.depth_override is not None:
        doc["depth_override"] = pv.depth_override
    return doc


def model_to_doc(m: Model25) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "parts": [
            {"part_id": p.part_id, "vertex_count": p.vertex_count,
             "triangles": [[int(i) for i in tri] for tri in p.triangles]}
            for p in m.parts
        ],
        "key_views": [
            {"view": _euler_doc(rec.view),
             "parts": {topo.part_id: part_view_to_doc(pv)
                       for topo, pv in zip(m.parts, rec.parts)}}
            for rec in m.key_views
        ],
    }
    if m.solved is not None:
        doc["solved"] = {
            topo.part_id: {
                "anchor3d": [float(x) for x in sp.anchor3d],
                "distortions": [[float(dx), float(dy)] for dx, dy in sp.distortions],
            }
            for topo, sp in zip(m.parts, m.solved)
        }
    if m.reference_view_index is not None:
        doc["reference_view_index"] = m.reference_view_index
    return doc


def save_model(m: Model25) -> bytes:
    return jsonio.dump_bytes(model_to_doc(m))


def frame_to_doc(frame: BlendedFrame) -> dict:
    return {
        "parts": [
            {
                "part_id": frame.part_ids[i],
                "position": [float(x) for x in frame.positions[i]],
                "depth": float(frame.depths[i]),
                "color": [float(c) for c in frame.colors[i]],
                "vertices": [[float(x), float(y)] for x, y in frame.vertices[i]],
            }
            for i in range(len(frame.part_ids))
        ],
        "draw_order": list(frame.draw_order),
    }
