"""Append-only per-session event logs on disk.

Each session lives in ``<root>/<session id>/events.jsonl``; one JSON object
per line, first line the creation event. Appends are flushed and fsynced so
a committed event survives the process.
"""

from __future__ import annotations

import json
import os
import re
from pathlib import Path

_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class UnknownSessionError(KeyError):
    pass


class SessionExistsError(ValueError):
    pass


class EventStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _log_path(self, session_id: str) -> Path:
        if not _ID_RE.match(session_id):
            raise UnknownSessionError(session_id)
        return self.root / session_id / "events.jsonl"

    def exists(self, session_id: str) -> bool:
        try:
            return self._log_path(session_id).exists()
        except UnknownSessionError:
            return False

    def list_ids(self) -> list:
        return sorted(p.parent.name for p in self.root.glob("*/events.jsonl"))

    def create(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "x") as f:
            self._write(f, event)

    def append(self, session_id: str, event: dict) -> None:
        path = self._log_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        with open(path, "a") as f:
            self._write(f, event)

    def read(self, session_id: str) -> list:
        path = self._log_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        events = []
        with open(path) as f:
            for line in f:
                line = line.strip()
                if line:
                    events.append(json.loads(line))
        return events

    @staticmethod
    def _write(f, event: dict) -> None:
        f.write(json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n")
        f.flush()
        os.fsync(f.fileno())
