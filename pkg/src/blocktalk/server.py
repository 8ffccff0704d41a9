"""HTTP and WebSocket access to a dialogue session.

Endpoints:
    GET  /api/scene            current scene; ?at=|NowK| (or K) for a past one
    POST /api/move             {"block": name, "to": [x, y, z]}
    POST /api/ask              {"text": question} -> {"answer", "ulf"?}
    GET  /api/history          time tokens, moves, and the event log
    WS   /api/events           JSON event stream (move/ask/answer/noise/error)
"""

from __future__ import annotations

import asyncio
import threading
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from pydantic import BaseModel

from . import memory as em
from .memory import UnknownTime
from .session import Session
from .world import World, world_to_dict


class MoveRequest(BaseModel):
    block: str
    to: list[float]


class AskRequest(BaseModel):
    text: str


class EventHub:
    """Fan-out of session events to connected websockets."""

    def __init__(self):
        self.queues: list[asyncio.Queue] = []
        self.lock = threading.Lock()

    def subscribe(self) -> asyncio.Queue:
        q: asyncio.Queue = asyncio.Queue()
        with self.lock:
            self.queues.append(q)
        return q

    def unsubscribe(self, q: asyncio.Queue) -> None:
        with self.lock:
            if q in self.queues:
                self.queues.remove(q)

    def publish(self, event: dict) -> None:
        with self.lock:
            for q in self.queues:
                q.put_nowait(event)


def _scene_json(session: Session, at: Optional[str]) -> dict:
    if at is None:
        scene = session.memory.current_scene
        token = session.memory.now
    else:
        try:
            token = session.memory.token(int(at) if at.lstrip("-").isdigit() else at)
        except UnknownTime:
            raise HTTPException(status_code=404, detail=f"unknown time {at!r}")
        scene = em.reconstruct_scene(session.memory, token)
    return {
        "token": token.name,
        "side": scene.side,
        "table": [scene.table[0] * 2, scene.table[1] * 2],
        "blocks": [
            {"name": name, "color": session.world.blocks[name].color,
             "position": list(pos)}
            for name, pos in sorted(scene.positions.items())
        ],
    }


def create_app(world: World, session: Optional[Session] = None) -> FastAPI:
    app = FastAPI(title="blocktalk")
    session = session or Session(world, realtime=True)
    hub = EventHub()
    lock = threading.Lock()
    app.state.session = session

    def emit_new_events(start: int) -> None:
        for ev in session.events[start:]:
            hub.publish({"seq": ev.seq, "clock": ev.clock,
                         "kind": ev.kind, "payload": ev.payload})

    @app.get("/api/scene")
    def get_scene(at: Optional[str] = None) -> dict:
        with lock:
            return _scene_json(session, at)

    @app.post("/api/move")
    def post_move(req: MoveRequest) -> dict:
        if len(req.to) != 3:
            raise HTTPException(status_code=422, detail="to must be [x, y, z]")
        with lock:
            mark = len(session.events)
            result = session.handle_move(req.block, tuple(req.to))
            emit_new_events(mark)
        if not result["ok"]:
            raise HTTPException(status_code=409, detail=result["error"])
        return result

    @app.post("/api/ask")
    def post_ask(req: AskRequest) -> dict:
        with lock:
            mark = len(session.events)
            result = session.handle_ask(req.text)
            emit_new_events(mark)
        return result

    @app.get("/api/history")
    def get_history() -> dict:
        with lock:
            return {
                "times": [{"token": t.name, "clock": t.wallclock,
                           "phase": t.phase} for t in session.memory.times],
                "moves": [{"block": mv.block, "from": list(mv.src),
                           "to": list(mv.dst), "token": mv.at.name}
                          for mv in session.memory.moves],
                "events": [{"seq": ev.seq, "clock": ev.clock, "kind": ev.kind,
                            "payload": ev.payload} for ev in session.events],
                "world": world_to_dict(session.world),
            }

    @app.websocket("/api/events")
    async def events_ws(ws: WebSocket) -> None:
        await ws.accept()
        q = hub.subscribe()
        try:
            while True:
                event = await q.get()
                await ws.send_json(event)
        except WebSocketDisconnect:
            pass
        finally:
            hub.unsubscribe(q)

    return app


def serve(world: World, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn
    uvicorn.run(create_app(world), host=host, port=port, log_level="warning")
