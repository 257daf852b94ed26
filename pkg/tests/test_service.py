import json
import threading

import pytest
from fastapi.testclient import TestClient

from meo.clip_io import clip_to_doc, load_clip
from meo.inducer import ReplayBackend, ScriptedBackend
from meo.inducer.replay_fixtures import (
    ARM_CONTEXT, ARM_INSTRUCTION, KICK_CONTEXT, KICK_INSTRUCTION,
    SQUAT_CONTEXT, SQUAT_INSTRUCTION, build_default_fixtures,
)
from meo.infill.dataset import squat_fixture
from meo.service import (
    EventStore, SessionManager, clips_bitwise_equal, create_app,
    rebuild_session,
)
from meo.service.store import UnknownSessionError


@pytest.fixture
def backend():
    return ReplayBackend(build_default_fixtures())


@pytest.fixture
def client(tmp_path, backend):
    app = create_app(data_dir=tmp_path, backend=backend)
    return TestClient(app)


@pytest.fixture
def clip_doc():
    return clip_to_doc(squat_fixture())


def make_session(client, clip_doc, ctx=SQUAT_CONTEXT):
    r = client.post("/sessions", json={"clip": clip_doc,
                                       "source_description": ctx})
    assert r.status_code == 201
    return r.json()["id"]


class TestEventStore:
    def test_create_append_read(self, tmp_path):
        store = EventStore(tmp_path)
        store.create("abc", {"type": "created", "n": 1})
        store.append("abc", {"type": "edit", "n": 2})
        events = store.read("abc")
        assert [e["n"] for e in events] == [1, 2]

    def test_unknown_session_raises(self, tmp_path):
        store = EventStore(tmp_path)
        with pytest.raises(UnknownSessionError):
            store.read("missing")
        with pytest.raises(UnknownSessionError):
            store.append("missing", {})

    def test_append_only_on_disk(self, tmp_path):
        store = EventStore(tmp_path)
        store.create("s1", {"type": "created"})
        first = (tmp_path / "s1" / "events.jsonl").read_text()
        store.append("s1", {"type": "undo"})
        second = (tmp_path / "s1" / "events.jsonl").read_text()
        assert second.startswith(first)

    def test_traversal_rejected(self, tmp_path):
        store = EventStore(tmp_path)
        with pytest.raises(UnknownSessionError):
            store.read("../etc/passwd")


class TestSessionEndpoints:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_create_and_fetch_source(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        got = client.get(f"/sessions/{sid}/clip", params={"which": "source"})
        assert got.json() == json.loads(json.dumps(clip_doc))

    def test_invalid_clip_422_names_location(self, client, clip_doc):
        bad = json.loads(json.dumps(clip_doc))
        bad["frames"][2]["rotations"]["head"] = [9.0, 0, 0, 0]
        r = client.post("/sessions", json={"clip": bad})
        assert r.status_code == 422
        assert "frames[2]" in r.json()["detail"]

    def test_distinct_ids(self, client, clip_doc):
        assert make_session(client, clip_doc) != make_session(client, clip_doc)

    def test_edit_worked_example(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        r = client.post(f"/sessions/{sid}/edits",
                        json={"instruction": SQUAT_INSTRUCTION})
        assert r.status_code == 200
        body = r.json()
        assert body["program"] == "translate(waist, up) @ when(waist, lowest, at)"
        assert body["history_length"] == 1
        assert body["decomposition"]["subgoals"][0]["joint"] == "waist"

    def test_edit_unknown_session_404(self, client):
        r = client.post("/sessions/deadbeef/edits", json={"instruction": "x"})
        assert r.status_code == 404

    def test_induction_failure_502_with_transcript(self, tmp_path, clip_doc):
        backend = ScriptedBackend(["garbage"] * 3)
        app = create_app(data_dir=tmp_path, backend=backend)
        client = TestClient(app)
        sid = make_session(client, clip_doc)
        r = client.post(f"/sessions/{sid}/edits", json={"instruction": "hello"})
        assert r.status_code == 502
        assert r.json()["detail"]["transcript"] == ["garbage"] * 3

    def test_failed_edit_leaves_session_unchanged(self, tmp_path, clip_doc):
        backend = ScriptedBackend(["garbage"] * 3)
        app = create_app(data_dir=tmp_path, backend=backend)
        client = TestClient(app)
        sid = make_session(client, clip_doc)
        before = client.get(f"/sessions/{sid}/clip").json()
        client.post(f"/sessions/{sid}/edits", json={"instruction": "hello"})
        after = client.get(f"/sessions/{sid}/clip").json()
        assert before == after
        assert client.get(f"/sessions/{sid}/history").json() == {"turns": []}

    def test_spline_before_edit_404(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        r = client.get(f"/sessions/{sid}/clip", params={"which": "spline"})
        assert r.status_code == 404
        assert "no edit yet" in r.json()["detail"]

    def test_source_immutable_after_edits(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        client.post(f"/sessions/{sid}/edits",
                    json={"instruction": SQUAT_INSTRUCTION})
        src = client.get(f"/sessions/{sid}/clip", params={"which": "source"})
        assert src.json() == json.loads(json.dumps(clip_doc))

    def test_undo_restores_bitwise(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        original = client.get(f"/sessions/{sid}/clip").json()
        client.post(f"/sessions/{sid}/edits",
                    json={"instruction": SQUAT_INSTRUCTION})
        assert client.get(f"/sessions/{sid}/clip").json() != original
        r = client.post(f"/sessions/{sid}/undo")
        assert r.status_code == 200
        assert client.get(f"/sessions/{sid}/clip").json() == original

    def test_undo_empty_409(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        assert client.post(f"/sessions/{sid}/undo").status_code == 409

    def test_iterative_higher_flow(self, client):
        import numpy as np

        from meo.infill.dataset import generate_clip
        kick = clip_to_doc(generate_clip("kick", np.random.default_rng(0)))
        sid = make_session(client, kick, ctx=KICK_CONTEXT)
        r1 = client.post(f"/sessions/{sid}/edits",
                         json={"instruction": KICK_INSTRUCTION})
        assert r1.status_code == 200
        r2 = client.post(f"/sessions/{sid}/edits", json={"instruction": "higher"})
        assert r2.status_code == 200
        assert r2.json()["history_length"] == 2
        assert "right_foot" in r2.json()["program"]

    def test_fk_debug_endpoint(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        r = client.get(f"/sessions/{sid}/fk", params={"frame": 0})
        assert r.status_code == 200
        positions = r.json()["positions"]
        assert len(positions) == 19
        clip = load_clip(json.dumps(clip_doc))
        from meo.motion import forward_kinematics
        want = forward_kinematics(clip, 0)
        for name, p in positions.items():
            assert max(abs(a - b) for a, b in zip(p, want[name])) < 1e-9

    def test_fk_out_of_range_422(self, client, clip_doc):
        sid = make_session(client, clip_doc)
        r = client.get(f"/sessions/{sid}/fk", params={"frame": 999})
        assert r.status_code == 422


class TestEventSourcing:
    def test_rehydration_after_restart(self, tmp_path, backend, clip_doc):
        app = create_app(data_dir=tmp_path, backend=backend)
        client = TestClient(app)
        sid = make_session(client, clip_doc)
        client.post(f"/sessions/{sid}/edits",
                    json={"instruction": SQUAT_INSTRUCTION})
        edited = client.get(f"/sessions/{sid}/clip").json()

        app2 = create_app(data_dir=tmp_path,
                          backend=ReplayBackend(build_default_fixtures()))
        client2 = TestClient(app2)
        assert client2.get(f"/sessions/{sid}/clip").json() == edited
        assert len(client2.get(f"/sessions/{sid}/history").json()["turns"]) == 1

    def test_replay_with_backend_reproduces_bitwise(self, tmp_path, backend,
                                                    clip_doc):
        manager = SessionManager(tmp_path, backend)
        session = manager.create(clip_doc, SQUAT_CONTEXT)
        manager.submit(session.id, SQUAT_INSTRUCTION)
        assert manager.replay_check(session.id)

    def test_replay_includes_undo(self, tmp_path, backend, clip_doc):
        manager = SessionManager(tmp_path, backend)
        session = manager.create(clip_doc, SQUAT_CONTEXT)
        manager.submit(session.id, SQUAT_INSTRUCTION)
        manager.undo(session.id)
        manager.submit(session.id, SQUAT_INSTRUCTION)
        events = manager.store.read(session.id)
        assert [e["type"] for e in events] == ["created", "edit", "undo", "edit"]
        replayed = rebuild_session(events, backend=backend)
        assert clips_bitwise_equal(replayed.current_clip,
                                   manager.get(session.id).current_clip)

    def test_concurrent_sessions_isolated(self, tmp_path, backend, clip_doc):
        manager = SessionManager(tmp_path, backend)
        ids = [manager.create(clip_doc, SQUAT_CONTEXT).id for _ in range(4)]
        errors = []

        def work(sid):
            try:
                manager.submit(sid, SQUAT_INSTRUCTION)
                manager.undo(sid)
                manager.submit(sid, SQUAT_INSTRUCTION)
            except Exception as e:  # pragma: no cover
                errors.append(e)

        threads = [threading.Thread(target=work, args=(sid,)) for sid in ids]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        for sid in ids:
            assert len(manager.get(sid).history) == 1
            assert manager.replay_check(sid)
