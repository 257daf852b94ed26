"""Session state machine over the event log.

State evolves only via edits and undos. Every committed state change is one
appended event, so folding the log from the creation event reconstructs the
session; re-running the logged instructions through a deterministic agent
backend reproduces the current clip bitwise.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Optional

from ..clip_io import ClipFormatError, clip_to_doc, load_clip
from ..infill.engine import EngineConfig, execute_program
from ..inducer import EditPrompt, SessionHistory, Turn, induce
from ..inducer.types import JointSubgoal, PromptDecomposition
from ..lang.parser import parse_meo
from ..lang.printer import print_meo
from ..lang.validate import validate_meo
from ..motion import MotionClip
from .store import EventStore, UnknownSessionError


class EmptyHistoryError(RuntimeError):
    pass


class ExecutionFailure(RuntimeError):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _engine_doc(config: EngineConfig) -> dict:
    return {"variant": config.variant, "context_w": config.context_w,
            "seed": config.seed}


def _engine_from_doc(doc: dict) -> EngineConfig:
    return EngineConfig(variant=doc.get("variant", "interp"),
                        context_w=int(doc.get("context_w", 5)),
                        seed=int(doc.get("seed", 0)))


def _decomposition_doc(d: PromptDecomposition) -> dict:
    return {"e_ctx": d.e_ctx, "e_goal": d.e_goal, "e_f": d.e_f,
            "subgoals": [{"joint": s.joint, "sub_goal": s.text}
                         for s in d.subgoals]}


def _decomposition_from_doc(doc: dict) -> PromptDecomposition:
    return PromptDecomposition(
        doc["e_ctx"], doc["e_goal"], doc.get("e_f"),
        tuple(JointSubgoal(s["joint"], s["sub_goal"])
              for s in doc.get("subgoals", ())))


@dataclass
class EditSession:
    id: str
    source_description: str
    engine: EngineConfig
    clip_source: MotionClip
    current_clip: MotionClip
    spline_clip: Optional[MotionClip] = None
    history: SessionHistory = field(default_factory=SessionHistory)
    undo_stack: list = field(default_factory=list)  # (clip, spline) pre-edit
    turn_reports: list = field(default_factory=list)
    created: str = ""
    updated: str = ""

    def summary(self) -> dict:
        return {
            "id": self.id,
            "source_description": self.source_description,
            "engine": _engine_doc(self.engine),
            "frames": len(self.current_clip.frames),
            "fps": self.current_clip.fps,
            "history_length": len(self.history),
            "created": self.created,
            "updated": self.updated,
        }


def _run_edit(session: EditSession, instruction: str, backend,
              max_retries: int = 3):
    """Induce + validate + execute against the session's current clip.

    Pure with respect to the session: returns the induction result, the
    execution result, and the event to log. Raises InductionError or
    ExecutionFailure without mutating anything.
    """
    prompt = EditPrompt(instruction, session.source_description)
    result = induce(prompt, session.history, backend, max_retries=max_retries)

    diagnostics = validate_meo(result.program, session.current_clip)
    if diagnostics:
        raise ExecutionFailure(
            "program failed validation: " + "; ".join(diagnostics),
            {"program": print_meo(result.program), "diagnostics": diagnostics})
    try:
        execution = execute_program(session.current_clip, result.program,
                                    session.engine)
    except Exception as e:
        raise ExecutionFailure(
            f"execution failed: {e}",
            {"program": print_meo(result.program)}) from e

    event = {
        "type": "edit",
        "ts": _now(),
        "instruction": instruction,
        "program": print_meo(result.program),
        "decomposition": _decomposition_doc(result.decomposition),
        "node_trace": [
            {"node": nr.node.value, "attempts": nr.attempts, "raw": nr.raw,
             "justification": nr.justification}
            for nr in result.node_trace
        ],
    }
    return result, execution, event


def _commit_edit(session: EditSession, instruction: str, result, execution,
                 event: dict) -> None:
    session.undo_stack.append((session.current_clip, session.spline_clip))
    session.current_clip = execution.clip_edited
    session.spline_clip = execution.clip_spline
    session.history.append(Turn(
        EditPrompt(instruction, session.source_description),
        result.decomposition, result.program,
        tuple(nr.raw for nr in result.node_trace)))
    session.turn_reports.append({
        "instruction": instruction,
        "program": event["program"],
        "decomposition": event["decomposition"],
        "node_trace": event["node_trace"],
        "report": execution.report,
        "ts": event["ts"],
    })
    session.updated = event["ts"]


def _apply_undo(session: EditSession, ts: str) -> None:
    if not session.undo_stack:
        raise EmptyHistoryError("no edits to undo")
    session.current_clip, session.spline_clip = session.undo_stack.pop()
    session.history.turns.pop()
    session.turn_reports.pop()
    session.updated = ts


def rebuild_session(events: list, backend=None) -> EditSession:
    """Fold an event log back into a session.

    Without a backend, each logged edit replays its recorded program text.
    With a deterministic backend, each edit is re-induced from its logged
    instruction instead — the event-sourcing check that the log plus the
    agent fixtures pin down the current clip exactly.
    """
    if not events or events[0].get("type") != "created":
        raise ValueError("event log must start with a creation event")
    head = events[0]
    clip = load_clip(json.dumps(head["clip"]))
    session = EditSession(
        id=head["id"], source_description=head.get("source_description", ""),
        engine=_engine_from_doc(head.get("engine", {})),
        clip_source=clip, current_clip=clip,
        created=head.get("ts", ""), updated=head.get("ts", ""))
    for event in events[1:]:
        kind = event.get("type")
        if kind == "edit":
            if backend is not None:
                result, execution, replay_event = _run_edit(
                    session, event["instruction"], backend)
                if replay_event["program"] != event["program"]:
                    raise ExecutionFailure(
                        "replayed program diverges from the log: "
                        f"{replay_event['program']!r} != {event['program']!r}")
            else:
                program = parse_meo(event["program"])
                execution = execute_program(session.current_clip, program,
                                            session.engine)
                decomposition = _decomposition_from_doc(event["decomposition"])

                @dataclass(frozen=True)
                class _Logged:
                    program: object
                    decomposition: object
                    node_trace: tuple

                result = _Logged(program, decomposition, tuple())
                # reconstitute raw responses for the Root node's history view
                raws = tuple(nr["raw"] for nr in event.get("node_trace", ()))
                _commit_edit(session, event["instruction"], result, execution,
                             event)
                session.history.turns[-1] = Turn(
                    session.history.turns[-1].prompt, decomposition, program,
                    raws)
                continue
            _commit_edit(session, event["instruction"], result, execution,
                         event)
        elif kind == "undo":
            _apply_undo(session, event.get("ts", ""))
        else:
            raise ValueError(f"unknown event type {kind!r}")
    return session


class SessionManager:
    """Thread-safe facade: in-memory sessions backed by the event store."""

    def __init__(self, data_dir, backend, default_engine: EngineConfig | None = None):
        self.store = EventStore(data_dir)
        self.backend = backend
        self.default_engine = default_engine or EngineConfig()
        self._sessions: dict = {}
        self._locks: dict = {}
        self._registry_lock = threading.Lock()

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def create(self, clip_doc: dict, source_description: str = "",
               engine_doc: dict | None = None) -> EditSession:
        clip = load_clip(json.dumps(clip_doc))
        engine = (_engine_from_doc(engine_doc) if engine_doc
                  else self.default_engine)
        session_id = uuid.uuid4().hex
        ts = _now()
        event = {"type": "created", "id": session_id, "ts": ts,
                 "source_description": source_description,
                 "engine": _engine_doc(engine), "clip": clip_to_doc(clip)}
        with self._lock(session_id):
            self.store.create(session_id, event)
            session = EditSession(
                id=session_id, source_description=source_description,
                engine=engine, clip_source=clip, current_clip=clip,
                created=ts, updated=ts)
            self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> EditSession:
        with self._lock(session_id):
            return self._get_locked(session_id)

    def _get_locked(self, session_id: str) -> EditSession:
        session = self._sessions.get(session_id)
        if session is None:
            events = self.store.read(session_id)  # raises UnknownSessionError
            session = rebuild_session(events)
            self._sessions[session_id] = session
        return session

    def submit(self, session_id: str, instruction: str) -> dict:
        with self._lock(session_id):
            session = self._get_locked(session_id)
            result, execution, event = _run_edit(session, instruction,
                                                 self.backend)
            self.store.append(session_id, event)
            _commit_edit(session, instruction, result, execution, event)
            return dict(session.turn_reports[-1],
                        history_length=len(session.history))

    def undo(self, session_id: str) -> EditSession:
        with self._lock(session_id):
            session = self._get_locked(session_id)
            if not session.undo_stack:
                raise EmptyHistoryError("no edits to undo")
            event = {"type": "undo", "ts": _now()}
            self.store.append(session_id, event)
            _apply_undo(session, event["ts"])
            return session

    def history(self, session_id: str) -> list:
        with self._lock(session_id):
            return list(self._get_locked(session_id).turn_reports)

    def replay_check(self, session_id: str) -> bool:
        """Event-sourcing check: re-induce the log and compare bitwise."""
        with self._lock(session_id):
            session = self._get_locked(session_id)
            events = self.store.read(session_id)
        replayed = rebuild_session(events, backend=self.backend)
        return clips_bitwise_equal(replayed.current_clip, session.current_clip)


def clips_bitwise_equal(a: MotionClip, b: MotionClip) -> bool:
    if a.fps != b.fps or len(a.frames) != len(b.frames):
        return False
    for fa, fb in zip(a.frames, b.frames):
        if fa.root_translation.tobytes() != fb.root_translation.tobytes():
            return False
        if set(fa.joint_rotations) != set(fb.joint_rotations):
            return False
        for name, q in fa.joint_rotations.items():
            if q.tobytes() != fb.joint_rotations[name].tobytes():
                return False
    return True


__all__ = [
    "EditSession", "SessionManager", "EmptyHistoryError", "ExecutionFailure",
    "rebuild_session", "clips_bitwise_equal", "UnknownSessionError",
    "ClipFormatError",
]
