"""Deterministic SVG rendering of blended frames.

Output is meant for golden tests and comparison figures, so determinism is
the contract: stable element order (background rect, then one polygon group
per part in draw order), fixed 6-decimal coordinate formatting with negative
zero normalized, and colors as rgb()/fill-opacity pairs.  Rendering the same
frame twice yields byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

import numpy as np

from .arap import ArapCache
from .blend import BlendParams, DEFAULT_PARAMS, evaluate_frame
from .geometry import rotation_from_euler
from .model import BlendedFrame, Model25

_AXES = ("yaw", "pitch", "roll")


def _fmt(x: float) -> str:
    s = format(float(x), ".6f")
    return "0.000000" if s == "-0.000000" else s


def _rgb(color) -> str:
    r, g, b = (int(round(float(c) * 255.0)) for c in color[:3])
    return f"rgb({r},{g},{b})"


@dataclass(frozen=True)
class RenderOptions:
    """Canvas geometry and styling.

    World point (x, y) maps to canvas pixel
    (offset_x + scale*x, offset_y - scale*y): y points up in model space and
    down on the canvas.  Offsets default to the canvas center.
    """

    width: float = 640.0
    height: float = 480.0
    scale: float = 1.0
    offset: tuple[float, float] | None = None
    stroke_width: float = 0.0
    background: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("canvas dimensions must be positive")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.stroke_width < 0:
            raise ValueError("stroke width must be >= 0")

    def to_canvas(self, points: np.ndarray) -> np.ndarray:
        ox, oy = self.offset if self.offset is not None else (
            self.width / 2.0, self.height / 2.0)
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.column_stack((ox + self.scale * pts[:, 0],
                                oy - self.scale * pts[:, 1]))


DEFAULT_OPTIONS = RenderOptions()


def render_frame(frame: BlendedFrame, opts: RenderOptions = DEFAULT_OPTIONS) -> bytes:
    """Serialize one frame as an SVG 1.1 document (UTF-8 bytes)."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(opts.width)}" height="{_fmt(opts.height)}" '
        f'viewBox="0 0 {_fmt(opts.width)} {_fmt(opts.height)}">',
        f'<rect x="0" y="0" width="{_fmt(opts.width)}" height="{_fmt(opts.height)}" '
        f'fill="{_rgb(opts.background)}" fill-opacity="{_fmt(opts.background[3])}"/>',
    ]
    stroke = ""
    if opts.stroke_width > 0:
        stroke = f' stroke="rgb(0,0,0)" stroke-width="{_fmt(opts.stroke_width)}"'
    for i in frame.draw_order:
        pts = opts.to_canvas(frame.vertices[i])
        points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        color = frame.colors[i]
        lines.append(f'<g id={quoteattr("part:" + frame.part_ids[i])}>')
        lines.append(
            f'<polygon points="{points}" fill="{_rgb(color)}" '
            f'fill-opacity="{_fmt(color[3])}"{stroke}/>')
        lines.append('</g>')
    lines.append('</svg>')
    return ("\n".join(lines) + "\n").encode("utf-8")


def render_turntable(m: Model25, axis: str = "yaw",
                     degrees_per_frame: float = 10.0,
                     opts: RenderOptions = DEFAULT_OPTIONS,
                     params: BlendParams = DEFAULT_PARAMS,
                     cache=None) -> list[bytes]:
    """Render one full revolution about a single Euler axis, starting at the
    front view; quantization in ``params`` applies to every frame."""
    if axis not in _AXES:
        raise ValueError(f"axis must be one of {_AXES}")
    if not 0 < degrees_per_frame <= 360:
        raise ValueError("degrees_per_frame must be in (0, 360]")
    if cache is None:
        cache = ArapCache.build(m)
    count = int(np.ceil(360.0 / degrees_per_frame - 1e-9))
    frames = []
    for i in range(count):
        angles = {a: 0.0 for a in _AXES}
        angles[axis] = i * degrees_per_frame
        view = rotation_from_euler(**angles)
        frame = evaluate_frame(m, view, params, cache)
        frames.append(render_frame(frame, opts))
    return frames
