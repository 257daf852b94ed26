"""HTTP/JSON API for iterative motion editing sessions.

Endpoints (all JSON):
  GET  /healthz                      liveness probe
  POST /sessions                     create a session from a clip document
  POST /sessions/{id}/edits          run one natural-language edit
  GET  /sessions/{id}/clip?which=    fetch source | edited | spline clip
  POST /sessions/{id}/undo           revert the last edit
  GET  /sessions/{id}/history        all committed turns with reports
  GET  /sessions/{id}/fk?which=&frame=  per-joint world positions (debug)

If a static directory is supplied, it is served at ``/`` for the browser
studio. Request/response schemas are documented in docs/http-api.md.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..clip_io import ClipFormatError, clip_to_doc
from ..inducer import HttpBackend, InductionError, ReplayBackend, TransportError
from ..inducer.backend import ENV_URL
from ..inducer.replay_fixtures import build_default_fixtures
from ..infill.engine import EngineConfig
from ..motion import MotionError, forward_kinematics
from .sessions import (
    EmptyHistoryError, ExecutionFailure, SessionManager, UnknownSessionError,
)

ENV_DATA_DIR = "MEO_DATA_DIR"
DEFAULT_DATA_DIR = "meo-data"


class CreateSessionRequest(BaseModel):
    clip: dict
    source_description: str = ""
    engine: Optional[dict] = None


class EditRequest(BaseModel):
    instruction: str


def default_backend():
    """HTTP agent when an endpoint is configured, replay fixtures otherwise."""
    if os.environ.get(ENV_URL):
        return HttpBackend()
    return ReplayBackend(build_default_fixtures())


def create_app(data_dir=None, backend=None, engine: EngineConfig | None = None,
               static_dir=None) -> FastAPI:
    data_dir = data_dir or os.environ.get(ENV_DATA_DIR, DEFAULT_DATA_DIR)
    backend = backend or default_backend()
    manager = SessionManager(data_dir, backend, engine)

    app = FastAPI(title="meo-editor", version="1.0")
    app.state.manager = manager

    def _session(session_id: str):
        try:
            return manager.get(session_id)
        except UnknownSessionError:
            raise HTTPException(404, f"unknown session {session_id!r}")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            session = manager.create(req.clip, req.source_description,
                                     req.engine)
        except (ClipFormatError, MotionError, ValueError) as e:
            raise HTTPException(422, str(e))
        return session.summary()

    @app.post("/sessions/{session_id}/edits")
    def submit_edit(session_id: str, req: EditRequest):
        _session(session_id)
        if not req.instruction.strip():
            raise HTTPException(422, "instruction must be non-empty")
        try:
            return manager.submit(session_id, req.instruction)
        except TransportError as e:
            raise HTTPException(502, {"error": str(e),
                                      "transcript": e.transcript})
        except InductionError as e:
            raise HTTPException(502, {"error": str(e),
                                      "transcript": e.transcript})
        except ExecutionFailure as e:
            raise HTTPException(500, {"error": str(e), "report": e.report})

    @app.get("/sessions/{session_id}/clip")
    def get_clip(session_id: str,
                 which: str = Query("edited",
                                    pattern="^(source|edited|spline)$")):
        session = _session(session_id)
        if which == "source":
            clip = session.clip_source
        elif which == "edited":
            clip = session.current_clip
        else:
            if session.spline_clip is None:
                raise HTTPException(404, "no edit yet")
            clip = session.spline_clip
        return JSONResponse(clip_to_doc(clip))

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        _session(session_id)
        try:
            return manager.undo(session_id).summary()
        except EmptyHistoryError:
            raise HTTPException(409, "no edits to undo")

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str):
        _session(session_id)
        return {"turns": manager.history(session_id)}

    @app.get("/sessions/{session_id}/fk")
    def fk(session_id: str,
           which: str = Query("edited", pattern="^(source|edited|spline)$"),
           frame: int = Query(0, ge=0)):
        session = _session(session_id)
        clip = {"source": session.clip_source,
                "edited": session.current_clip,
                "spline": session.spline_clip}[which]
        if clip is None:
            raise HTTPException(404, "no edit yet")
        if frame >= len(clip.frames):
            raise HTTPException(422, f"frame {frame} out of range")
        positions = forward_kinematics(clip, frame)
        return {"frame": frame, "which": which,
                "positions": {name: [float(v) for v in p]
                              for name, p in positions.items()}}

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="studio")
    return app
