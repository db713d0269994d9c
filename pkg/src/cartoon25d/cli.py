"""Headless command-line driver for the full pipeline.

Subcommands: ``solve`` (triangulate anchors and store the solution),
``render`` (one frame as SVG, optionally dumping the numeric frame as JSON),
``turntable`` (a revolution of frames plus a manifest), ``animate`` (sample a
keyframe track and render each sample), and ``weights`` (print the weight
table of every scheme at a view).  Exit codes: 0 success, 1 invalid input,
2 usage error.  All outputs are deterministic functions of the inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .animation import load_track, sample_track
from .arap import ArapCache
from .baselines import (AnchorMethod, WeightMethod, anchor_no_vdd,
                        anchor_pure2d, weights_alternative)
from .blend import BlendParams, evaluate_frame, quantize_view
from .errors import Cartoon25dError, DegenerateConfiguration
from .geometry import rotation_from_euler
from .model import Model25, frame_to_doc, load_model, save_model
from .solver import anchor_residual, solve_model
from .svg import RenderOptions, render_frame, render_turntable


def _read_model(path: str) -> Model25:
    return load_model(Path(path).read_bytes())


def _solved(m: Model25) -> Model25:
    return m if m.is_solved else solve_model(m)


def _view_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--yaw", type=float, default=0.0, help="degrees about the vertical axis")
    p.add_argument("--pitch", type=float, default=0.0, help="degrees about the horizontal axis")
    p.add_argument("--roll", type=float, default=0.0, help="degrees about the viewing axis")
    p.add_argument("--quantize", type=float, default=0.0, metavar="STEP",
                   help="snap each angle to multiples of STEP degrees (0 = off)")


def _canvas_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--width", type=float, default=640.0)
    p.add_argument("--height", type=float, default=480.0)
    p.add_argument("--scale", type=float, default=1.0,
                   help="model units to pixels")
    p.add_argument("--stroke-width", type=float, default=0.0,
                   help="outline width in px (0 = no outline)")


def _options(args: argparse.Namespace) -> RenderOptions:
    return RenderOptions(width=args.width, height=args.height,
                         scale=args.scale, stroke_width=args.stroke_width)


def _frame_at(m: Model25, args: argparse.Namespace,
              cache: ArapCache | None = None):
    """Evaluate one frame honoring the method and quantization flags."""
    view = quantize_view(rotation_from_euler(args.yaw, args.pitch, args.roll),
                         args.quantize)
    params = BlendParams(quantize_step=0.0)  # quantization already applied
    weights = weights_alternative(WeightMethod(args.weight_method), view,
                                  [rec.view for rec in m.key_views])
    anchor_method = AnchorMethod(args.anchor_method)
    anchor_fn = None
    if anchor_method is AnchorMethod.NO_VDD:
        def anchor_fn(i, cur, w):
            return anchor_no_vdd(m, i, cur)
    elif anchor_method is AnchorMethod.PURE_2D:
        def anchor_fn(i, cur, w):
            return anchor_pure2d(m, i, w)
    return evaluate_frame(m, view, params, cache,
                          weights=weights, anchor_fn=anchor_fn)


def cmd_solve(args: argparse.Namespace) -> int:
    m = solve_model(_read_model(args.model))
    Path(args.out).write_bytes(save_model(m))
    print(f"{'part':<16}{'anchor3d':<34}{'residual':>12}{'max|d|':>12}")
    for i, (topo, sp) in enumerate(zip(m.parts, m.solved)):
        obs = [(rec.view, rec.parts[i].anchor) for rec in m.key_views]
        anchor = "({: .5g}, {: .5g}, {: .5g})".format(*sp.anchor3d)
        residual = anchor_residual(sp.anchor3d, obs)
        max_d = float(np.linalg.norm(sp.distortions, axis=1).max())
        print(f"{topo.part_id:<16}{anchor:<34}{residual:>12.3e}{max_d:>12.3e}")
    print(f"solved {len(m.parts)} parts across {len(m.key_views)} key views "
          f"-> {args.out}")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    m = _solved(_read_model(args.model))
    frame = _frame_at(m, args)
    svg = render_frame(frame, _options(args))
    if args.out:
        Path(args.out).write_bytes(svg)
    else:
        sys.stdout.buffer.write(svg)
    if args.dump_frame:
        Path(args.dump_frame).write_bytes(jsonio.dump_bytes(frame_to_doc(frame)))
    return 0


def cmd_turntable(args: argparse.Namespace) -> int:
    m = _solved(_read_model(args.model))
    params = BlendParams(quantize_step=args.quantize)
    frames = render_turntable(m, axis=args.axis,
                              degrees_per_frame=args.step,
                              opts=_options(args), params=params)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = []
    for i, svg in enumerate(frames):
        name = f"frame_{i:04d}.svg"
        (out_dir / name).write_bytes(svg)
        names.append(name)
    manifest = {"axis": args.axis, "degrees_per_frame": args.step,
                "count": len(names), "frames": names}
    (out_dir / "manifest.json").write_bytes(jsonio.dump_bytes(manifest))
    print(f"wrote {len(names)} frames -> {out_dir}")
    return 0


def cmd_animate(args: argparse.Namespace) -> int:
    if args.fps <= 0:
        raise Cartoon25dError("fps must be positive")
    track = load_track(args.track)
    t0 = track.start if args.t0 is None else args.t0
    t1 = track.end if args.t1 is None else args.t1
    if not track.start <= t0 <= t1 <= track.end:
        raise Cartoon25dError(
            f"requested range [{t0}, {t1}] outside track range "
            f"[{track.start}, {track.end}]")
    view = quantize_view(rotation_from_euler(args.yaw, args.pitch, args.roll),
                         args.quantize)
    params = BlendParams(quantize_step=0.0)
    opts = _options(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    times, names = [], []
    k = 0
    while True:
        t = t0 + k / args.fps
        if t > t1 + 1e-9:
            break
        t = min(t, t1)
        sampled = sample_track(track, t)
        frame = evaluate_frame(sampled, view, params)
        name = f"frame_{k:04d}.svg"
        (out_dir / name).write_bytes(render_frame(frame, opts))
        times.append(t)
        names.append(name)
        k += 1
    manifest = {"fps": args.fps, "times": times, "frames": names}
    (out_dir / "manifest.json").write_bytes(jsonio.dump_bytes(manifest))
    print(f"wrote {len(names)} frames -> {out_dir}")
    return 0


def cmd_weights(args: argparse.Namespace) -> int:
    m = _read_model(args.model)
    keys = [rec.view for rec in m.key_views]
    view = quantize_view(rotation_from_euler(args.yaw, args.pitch, args.roll),
                         args.quantize)
    header = "".join(f"{f'w{j}':>12}" for j in range(len(keys)))
    print(f"{'method':<20}{header}")
    for method in WeightMethod:
        try:
            w = weights_alternative(method, view, keys)
            row = "".join(f"{x:>12.6f}" for x in w.values)
        except DegenerateConfiguration as e:
            row = f"  degenerate: {e}"
        print(f"{method.value:<20}{row}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartoon25d",
        description="Layered 2.5D cartoon models: solve, blend, and render.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="triangulate anchors and store the solution")
    p.add_argument("model", help="input model JSON")
    p.add_argument("out", help="output model JSON with solved fields")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("render", help="render one frame as SVG")
    p.add_argument("model")
    _view_args(p)
    _canvas_args(p)
    p.add_argument("--anchor-method", default=AnchorMethod.VDD.value,
                   choices=[a.value for a in AnchorMethod])
    p.add_argument("--weight-method", default=WeightMethod.FROBENIUS_VDD.value,
                   choices=[w.value for w in WeightMethod])
    p.add_argument("--out", help="SVG output path (default: stdout)")
    p.add_argument("--dump-frame", metavar="FILE",
                   help="also write the numeric frame as JSON")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("turntable", help="render a revolution about one axis")
    p.add_argument("model")
    p.add_argument("--axis", default="yaw", choices=["yaw", "pitch", "roll"])
    p.add_argument("--step", type=float, default=10.0,
                   help="degrees per frame")
    p.add_argument("--quantize", type=float, default=0.0, metavar="STEP")
    _canvas_args(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_turntable)

    p = sub.add_parser("animate", help="sample a keyframe track and render")
    p.add_argument("track", help="track JSON: [{time, model|model_ref}, ...]")
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--t0", type=float, default=None)
    p.add_argument("--t1", type=float, default=None)
    _view_args(p)
    _canvas_args(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_animate)

    p = sub.add_parser("weights", help="print every weight scheme at a view")
    p.add_argument("model")
    _view_args(p)
    p.set_defaults(func=cmd_weights)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Cartoon25dError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
