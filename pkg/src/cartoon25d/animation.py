"""Time interpolation between solved layer models sharing structure.

A track is an ordered list of ``(time, model)`` keyframes whose parts,
triangulations, and key-view rotations all agree.  Sampling at an
intermediate time linearly interpolates every authored numeric component —
2D anchors, vertex positions, colors, depth overrides, and the 3D anchors —
while the rotations themselves are carried through unchanged.  The per-view
anchor offsets of the sampled model are re-derived from the interpolated
anchors instead of being interpolated independently: that keeps the key-view
reproduction identity exact on every sample, not just at the keyframes.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import jsonio
from .errors import (OutOfRange, ParseError, TopologyMismatch, UnsolvedModel,
                     ValidationError)
from .geometry import frobenius_distance
from .model import (KeyViewRecord, Model25, PartView, SolvedPart,
                    model_from_doc)
from .solver import solve_model

VIEW_MATCH_TOL = 1e-9


def _check_compatible(a: Model25, b: Model25, index: int) -> None:
    where = f"keyframes 0 and {index}"
    if len(a.parts) != len(b.parts):
        raise TopologyMismatch(
            f"{where}: part counts differ ({len(a.parts)} vs {len(b.parts)})")
    for pa, pb in zip(a.parts, b.parts):
        if pa.part_id != pb.part_id:
            raise TopologyMismatch(
                f"{where}: part ids differ ({pa.part_id!r} vs {pb.part_id!r})")
        if pa.vertex_count != pb.vertex_count or not np.array_equal(
                pa.triangles, pb.triangles):
            raise TopologyMismatch(
                f"{where}: triangulation of part {pa.part_id!r} differs")
    if len(a.key_views) != len(b.key_views):
        raise TopologyMismatch(
            f"{where}: key-view counts differ "
            f"({len(a.key_views)} vs {len(b.key_views)})")
    for j, (ra, rb) in enumerate(zip(a.key_views, b.key_views)):
        if frobenius_distance(ra.view, rb.view) > VIEW_MATCH_TOL:
            raise TopologyMismatch(f"{where}: rotations of key view {j} differ")
        for topo, pva, pvb in zip(a.parts, ra.parts, rb.parts):
            if (pva.depth_override is None) != (pvb.depth_override is None):
                raise TopologyMismatch(
                    f"{where}: depth override of part {topo.part_id!r} at key "
                    f"view {j} is set in one keyframe but not the other")
    if a.reference_view_index != b.reference_view_index:
        raise TopologyMismatch(f"{where}: reference view indices differ")


@dataclass(frozen=True)
class ModelTrack:
    """Keyframes at strictly increasing times; all models solved and
    structurally identical (validated on construction)."""

    keyframes: tuple[tuple[float, Model25], ...]

    def __post_init__(self):
        frames = tuple((float(t), m) for t, m in self.keyframes)
        if not frames:
            raise ValidationError("a track needs at least one keyframe")
        times = [t for t, _ in frames]
        if not all(np.isfinite(times)):
            raise ValidationError("keyframe times must be finite")
        if any(t1 <= t0 for t0, t1 in zip(times, times[1:])):
            raise ValidationError("keyframe times must be strictly increasing")
        for i, (_, m) in enumerate(frames):
            if m.solved is None:
                raise UnsolvedModel(f"keyframe {i} is unsolved")
            if i > 0:
                _check_compatible(frames[0][1], m, i)
        object.__setattr__(self, "keyframes", frames)

    @property
    def start(self) -> float:
        return self.keyframes[0][0]

    @property
    def end(self) -> float:
        return self.keyframes[-1][0]


def _lerp_models(a: Model25, b: Model25, s: float) -> Model25:
    """Per-component linear interpolation; offsets re-derived so that
    projecting the blended 3D anchor plus the offset reproduces the blended
    2D anchor exactly at every key view."""
    t = 1.0 - s
    nparts = len(a.parts)
    anchors3d = [t * a.solved[i].anchor3d + s * b.solved[i].anchor3d
                 for i in range(nparts)]
    key_views = []
    anchors2d = [[] for _ in range(nparts)]  # per part, per view
    for ra, rb in zip(a.key_views, b.key_views):
        views = []
        for i, (pva, pvb) in enumerate(zip(ra.parts, rb.parts)):
            anchor = t * pva.anchor + s * pvb.anchor
            anchors2d[i].append(anchor)
            override = None
            if pva.depth_override is not None:
                override = t * pva.depth_override + s * pvb.depth_override
            views.append(PartView(
                anchor=anchor,
                vertices=t * pva.vertices + s * pvb.vertices,
                color=t * pva.color + s * pvb.color,
                depth_override=override,
            ))
        key_views.append(KeyViewRecord(view=ra.view, parts=tuple(views)))
    solved = []
    for i in range(nparts):
        dist = np.array([
            anchors2d[i][j] - (rec.view.matrix @ anchors3d[i])[:2]
            for j, rec in enumerate(a.key_views)
        ])
        solved.append(SolvedPart(anchor3d=anchors3d[i], distortions=dist))
    return Model25(parts=a.parts, key_views=tuple(key_views),
                   solved=tuple(solved),
                   reference_view_index=a.reference_view_index)


def sample_track(track: ModelTrack, t: float) -> Model25:
    """Model at time ``t``; keyframe times return that keyframe exactly."""
    t = float(t)
    if not np.isfinite(t) or t < track.start or t > track.end:
        raise OutOfRange(
            f"time {t} outside track range [{track.start}, {track.end}]")
    for kt, m in track.keyframes:
        if t == kt:
            return m
    for (t0, m0), (t1, m1) in zip(track.keyframes, track.keyframes[1:]):
        if t0 < t < t1:
            return _lerp_models(m0, m1, (t - t0) / (t1 - t0))
    raise OutOfRange(f"time {t} outside track range")  # pragma: no cover


def track_from_doc(doc, base_dir: Path | None = None) -> ModelTrack:
    """Track document: JSON list of ``{time, model}`` (inline document) or
    ``{time, model_ref}`` (path relative to ``base_dir``)."""
    if not isinstance(doc, list):
        raise ParseError("track document must be a JSON list")
    frames = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict) or "time" not in entry:
            raise ParseError(f"track entry {i} must be an object with a time")
        if "model" in entry:
            model = model_from_doc(entry["model"])
        elif "model_ref" in entry:
            ref = Path(entry["model_ref"])
            if base_dir is not None and not ref.is_absolute():
                ref = base_dir / ref
            model = model_from_doc(jsonio.loads(ref.read_bytes()))
        else:
            raise ParseError(f"track entry {i} needs a model or model_ref")
        if model.solved is None:
            model = solve_model(model)
        frames.append((float(entry["time"]), model))
    return ModelTrack(tuple(frames))


def load_track(path: str | Path) -> ModelTrack:
    path = Path(path)
    return track_from_doc(jsonio.loads(path.read_bytes()), base_dir=path.parent)
