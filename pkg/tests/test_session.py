import json
import pathlib
import subprocess
import sys

import pytest
from fastapi.testclient import TestClient

from blocktalk import data_path
from blocktalk.server import create_app
from blocktalk.session import (CLARIFICATION_REPLY, GREETING_REPLY, Session,
                               load_transcript, replay)
from blocktalk.world import load_world


@pytest.fixture
def session(row8_world, grammar):
    trees, lex = grammar
    return Session(row8_world, trees=trees, lex=lex)


# --- basic dialogue loop ---------------------------------------------------------

def test_move_then_ask(session):
    out = session.handle_move("Toyota", (0.075, -0.6, 0.225), clock=0.0)
    assert out == {"ok": True, "noise": False, "token": "|Now2|"}
    out = session.handle_ask("Which block did I move?", clock=5.0)
    assert out["answer"] == "You moved the Toyota block."
    assert out["ulf"].startswith("(")


def test_noise_move_makes_no_token(session):
    pos = session.world.scene.positions["Toyota"]
    nudged = (pos[0] + 0.01, pos[1], pos[2])
    out = session.handle_move("Toyota", nudged, clock=1.0)
    assert out == {"ok": True, "noise": True}
    assert session.memory.now.name == "|Now0|"
    assert [ev.kind for ev in session.events] == ["noise"]


def test_bad_move_rejected_session_intact(session):
    out = session.handle_move("Toyota", (9.0, 9.0, 0.075), clock=1.0)
    assert out["ok"] is False and "error" in out
    assert session.memory.now.name == "|Now0|"
    assert session.events[-1].kind == "error"
    # session still answers afterwards
    out = session.handle_ask("Where is the Toyota block?", clock=2.0)
    assert out["answer"].startswith("The Toyota block is")


def test_garbage_input_gets_clarification(session):
    out = session.handle_ask("flurble snork zzz?", clock=1.0)
    assert out["answer"] == CLARIFICATION_REPLY
    out = session.handle_ask("Where is the Toyota block?", clock=2.0)
    assert "Toyota" in out["answer"]


def test_greeting(session):
    assert session.handle_ask("Hello!", clock=1.0)["answer"] == GREETING_REPLY


def test_clock_is_monotone(session):
    session.handle_ask("Hello!", clock=10.0)
    session.handle_ask("Hello!", clock=5.0)     # stale clock may not rewind time
    assert session.clock == 10.0


# --- transcripts -----------------------------------------------------------------

def drive(session):
    session.handle_move("Toyota", (0.075, -0.6, 0.225), clock=0.0)
    session.handle_ask("Which block did I move?", clock=5.0)
    session.handle_ask("Where is the Toyota block?", clock=10.0)


def test_transcript_round_trip(session, tmp_path):
    drive(session)
    path = tmp_path / "t.jsonl"
    session.save_transcript(path)
    world, events = load_transcript(path)
    # the header stores the scene before any move
    assert world.scene.positions["Toyota"] == \
        pytest.approx((-0.225, -0.6, 0.075))
    assert [ev.kind for ev in events] == \
        ["move", "ask", "answer", "ask", "answer"]


def test_replay_clean(session, tmp_path):
    drive(session)
    path = tmp_path / "t.jsonl"
    session.save_transcript(path)
    report = replay(path)
    assert report.ok and report.asked == 2


def test_replay_flags_divergence(session, tmp_path):
    drive(session)
    path = tmp_path / "t.jsonl"
    session.save_transcript(path)
    lines = path.read_text().splitlines()
    doctored = json.loads(lines[3])
    assert doctored["kind"] == "answer"
    doctored["payload"]["text"] = "You moved the Target block."
    lines[3] = json.dumps(doctored)
    path.write_text("\n".join(lines) + "\n")
    report = replay(path)
    assert not report.ok
    (seq, recorded, fresh) = report.mismatches[0]
    assert recorded == "You moved the Target block."
    assert fresh == "You moved the Toyota block."


def test_load_transcript_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"version": 99}\n')
    with pytest.raises(ValueError):
        load_transcript(path)


def test_replay_cli_exit_codes(tmp_path):
    bundled = pathlib.Path(data_path("transcript_row8.jsonl"))
    ok = subprocess.run(
        [sys.executable, "-m", "blocktalk.cli", "replay", str(bundled)],
        capture_output=True, text=True)
    assert ok.returncode == 0
    assert "0 mismatch(es)" in ok.stdout

    lines = bundled.read_text().splitlines()
    idx = next(i for i, ln in enumerate(lines)
               if '"kind": "answer"' in ln)
    ev = json.loads(lines[idx])
    ev["payload"]["text"] = "No."
    lines[idx] = json.dumps(ev)
    doctored = tmp_path / "doctored.jsonl"
    doctored.write_text("\n".join(lines) + "\n")
    bad = subprocess.run(
        [sys.executable, "-m", "blocktalk.cli", "replay", str(doctored)],
        capture_output=True, text=True)
    assert bad.returncode == 2
    assert "MISMATCH" in bad.stdout


# --- HTTP API --------------------------------------------------------------------

@pytest.fixture
def client(row8_world, grammar):
    trees, lex = grammar
    session = Session(row8_world, trees=trees, lex=lex)  # explicit clock mode
    app = create_app(row8_world, session=session)
    return TestClient(app)


def test_api_scene_now(client):
    r = client.get("/api/scene")
    assert r.status_code == 200
    body = r.json()
    assert body["token"] == "|Now0|"
    assert len(body["blocks"]) == 8
    assert {"name", "color", "position"} <= set(body["blocks"][0])


def test_api_move_ask_and_past_scene(client):
    r = client.post("/api/move",
                    json={"block": "Toyota", "to": [0.075, -0.6, 0.225]})
    assert r.status_code == 200 and r.json()["token"] == "|Now2|"
    r = client.post("/api/ask", json={"text": "Which block did I move?"})
    assert r.json()["answer"] == "You moved the Toyota block."
    # the pre-move scene stays addressable by token
    r = client.get("/api/scene", params={"at": "|Now0|"})
    toyota = next(b for b in r.json()["blocks"] if b["name"] == "Toyota")
    assert toyota["position"] == pytest.approx([-0.225, -0.6, 0.075])


def test_api_move_errors(client):
    r = client.post("/api/move", json={"block": "Toyota", "to": [1, 2]})
    assert r.status_code == 422
    r = client.post("/api/move", json={"block": "Toyota", "to": [9, 9, 0.075]})
    assert r.status_code == 409


def test_api_scene_unknown_time(client):
    assert client.get("/api/scene", params={"at": "|Now99|"}).status_code == 404


def test_api_history(client):
    client.post("/api/move", json={"block": "Toyota", "to": [0.075, -0.6, 0.225]})
    client.post("/api/ask", json={"text": "Which block did I move?"})
    body = client.get("/api/history").json()
    assert [t["token"] for t in body["times"]] == ["|Now0|", "|Now1|", "|Now2|"]
    assert body["moves"][0]["block"] == "Toyota"
    assert [e["kind"] for e in body["events"]] == ["move", "ask", "answer"]
    assert "blocks" in body["world"]


def test_api_events_websocket(client):
    with client.websocket_connect("/api/events") as ws:
        client.post("/api/move",
                    json={"block": "Toyota", "to": [0.075, -0.6, 0.225]})
        ev = ws.receive_json()
        assert ev["kind"] == "move" and ev["payload"]["block"] == "Toyota"
        client.post("/api/ask", json={"text": "Hi!"})
        assert ws.receive_json()["kind"] == "ask"
        assert ws.receive_json()["kind"] == "answer"
