from .app import create_app, default_backend
from .sessions import (
    EditSession, EmptyHistoryError, ExecutionFailure, SessionManager,
    clips_bitwise_equal, rebuild_session,
)
from .store import EventStore, SessionExistsError, UnknownSessionError

__all__ = [
    "create_app", "default_backend", "EditSession", "SessionManager",
    "EmptyHistoryError", "ExecutionFailure", "rebuild_session",
    "clips_bitwise_equal", "EventStore", "UnknownSessionError",
    "SessionExistsError",
]
