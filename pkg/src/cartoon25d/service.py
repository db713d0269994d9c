"""Local HTTP service exposing mutable modeling sessions.

The state machine mirrors the interactive workflow: load a layered model,
add/delete key views, solve, then pull frames while dragging the camera.
Frames are served only from a solved, unmodified model; any mutation marks
the session dirty and the frame endpoint answers 409 ``needs_solve`` until
the next solve.  Mutations within a session serialize through a lock; frame
reads go against an immutable solved snapshot and need no lock.  Responses
are emitted through the package's deterministic JSON writer, so identical
state and query yield identical bytes.
"""

from __future__ import annotations

import argparse
import itertools
import os
import threading
from dataclasses import dataclass, field, replace

import numpy as np
import uvicorn
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import jsonio
from .arap import ArapCache
from .blend import BlendParams, evaluate_frame
from .errors import (Cartoon25dError, DuplicateKeyView, EmptyModel,
                     ParseError)
from .geometry import IDENTITY_VIEW, ViewRotation, rotation_from_euler
from .model import (Model25, add_key_view, delete_latest_key_view,
                    frame_to_doc, key_view_from_doc, model_from_doc,
                    model_to_doc, part_view_from_doc, replace_part_view)
from .solver import anchor_residual, solve_model

DEFAULT_PORT = 8520


@dataclass
class Session:
    model: Model25
    dirty: bool = True
    snapshot: tuple[Model25, ArapCache] | None = None
    current_view: ViewRotation = IDENTITY_VIEW
    params: BlendParams = BlendParams(quantize_step=0.0)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _json(payload, status: int = 200) -> Response:
    return Response(content=jsonio.dump_bytes(payload),
                    media_type="application/json", status_code=status)


def _error(kind: str, detail: str, status: int) -> Response:
    return _json({"error": kind, "detail": detail}, status)


def _from_exc(exc: Cartoon25dError, status: int) -> Response:
    return _error(type(exc).__name__, str(exc), status)


def _diagnostics(m: Model25) -> dict:
    residuals, norms = {}, {}
    for i, (topo, sp) in enumerate(zip(m.parts, m.solved)):
        obs = [(rec.view, rec.parts[i].anchor) for rec in m.key_views]
        residuals[topo.part_id] = anchor_residual(sp.anchor3d, obs)
        norms[topo.part_id] = [float(np.linalg.norm(d)) for d in sp.distortions]
    return {"residuals": residuals, "distortion_norms": norms}


def _parse_angle(name: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"query parameter {name!r} must be a number") from None
    if not np.isfinite(value):
        raise ParseError(f"query parameter {name!r} must be finite")
    return value


def create_app() -> FastAPI:
    app = FastAPI(title="cartoon25d session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"http://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()
    ids = itertools.count(1)

    def get_session(session_id: str) -> Session | None:
        return sessions.get(session_id)

    @app.get("/health")
    def health() -> Response:
        return _json({"status": "ok", "sessions": len(sessions)})

    @app.post("/session")
    async def create_session(request: Request) -> Response:
        try:
            model = model_from_doc(jsonio.loads(await request.body()))
        except Cartoon25dError as exc:
            return _from_exc(exc, 400)
        with registry_lock:
            session_id = f"s{next(ids)}"
            sessions[session_id] = Session(model=model)
        return _json({"session_id": session_id,
                      "key_view_count": len(model.key_views)}, 201)

    @app.get("/session/{session_id}/model")
    def export_model(session_id: str) -> Response:
        session = get_session(session_id)
        if session is None:
            return _error("UnknownSession", session_id, 404)
        return _json(model_to_doc(session.model))

    @app.post("/session/{session_id}/keyview")
    async def add_keyview(session_id: str, request: Request) -> Response:
        session = get_session(session_id)
        if session is None:
            return _error("UnknownSession", session_id, 404)
        try:
            body = jsonio.loads(await request.body())
        except ParseError as exc:
            return _from_exc(exc, 400)
        with session.lock:
            try:
                rec = key_view_from_doc(body, session.model.parts)
                session.model = add_key_view(session.model, rec)
            except DuplicateKeyView as exc:
                return _from_exc(exc, 409)
            except Cartoon25dError as exc:
                return _from_exc(exc, 400)
            session.dirty = True
            session.snapshot = None
            return _json({"key_view_count": len(session.model.key_views)})

    @app.delete("/session/{session_id}/keyview/latest")
    def delete_keyview(session_id: str) -> Response:
        session = get_session(session_id)
        if session is None:
            return _error("UnknownSession", session_id, 404)
        with session.lock:
            try:
                session.model = delete_latest_key_view(session.model)
            except EmptyModel as exc:
                return _from_exc(exc, 409)
            session.dirty = True
            session.snapshot = None
            return _json({"key_view_count": len(session.model.key_views)})

    @app.put("/session/{session_id}/part/{part_id}/keyview/{index}")
    async def edit_part(session_id: str, part_id: str, index: int,
                        request: Request) -> Response:
        session = get_session(session_id)
        if session is None:
            return _error("UnknownSession", session_id, 404)
        try:
            body = jsonio.loads(await request.body())
        except ParseError as exc:
            return _from_exc(exc, 400)
        with session.lock:
            if not 0 <= index < len(session.model.key_views):
                return _error("UnknownKeyView", f"key view {index}", 404)
            try:
                pv = part_view_from_doc(body, f"part[{part_id}]")
                session.model = replace_part_view(session.model, part_id,
                                                  index, pv)
            except KeyError:
                return _error("UnknownPart", part_id, 404)
            except Cartoon25dError as exc:
                return _from_exc(exc, 400)
            session.dirty = True
            session.snapshot = None
            return _json({"ok": True})

    @app.post("/session/{session_id}/solve")
    def solve(session_id: str) -> Response:
        session = get_session(session_id)
        if session is None:
            return _error("UnknownSession", session_id, 404)
        with session.lock:
            if not session.model.key_views:
                return _error("EmptyModel", "no key views to solve", 409)
            solved = solve_model(session.model)
            session.model = solved
            session.snapshot = (solved, ArapCache.build(solved))
            session.dirty = False
            return _json(_diagnostics(solved))

    @app.get("/session/{session_id}/frame")
    def frame(session_id: str, yaw: str = "0", pitch: str = "0",
              roll: str = "0", quantize: str = "0") -> Response:
        session = get_session(session_id)
        if session is None:
            return _error("UnknownSession", session_id, 404)
        snapshot = session.snapshot
        if session.dirty or snapshot is None:
            return _error("needs_solve",
                          "solve the session before requesting frames", 409)
        try:
            angles = [_parse_angle(n, v) for n, v in
                      (("yaw", yaw), ("pitch", pitch), ("roll", roll))]
            step = _parse_angle("quantize", quantize)
            view = rotation_from_euler(*angles)
            params = replace(session.params, quantize_step=step)
        except (Cartoon25dError, ValueError) as exc:
            return _error(type(exc).__name__, str(exc), 400)
        model, cache = snapshot
        result = evaluate_frame(model, view, params, cache)
        session.current_view = view
        return _json(frame_to_doc(result))

    return app


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(
        description="Run the modeling session HTTP service.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("CARTOON25D_PORT",
                                                   DEFAULT_PORT)))
    args = parser.parse_args(argv)
    uvicorn.run(create_app(), host=args.host, port=args.port,
                log_level="warning")


if __name__ == "__main__":
    main()
