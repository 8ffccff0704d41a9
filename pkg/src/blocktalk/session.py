"""Dialogue sessions: the glue between grammar, memory, and answering.

A session owns one world, one episodic memory, and one discourse context.
Every user action becomes a SessionEvent; the event log round-trips through
JSONL transcripts that can be replayed and checked against recorded answers.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional

from . import default_grammar
from . import hqa
from . import memory as em
from . import surface
from . import world as wm
from .discourse import DiscourseContext, UnresolvedReference, register_entities
from .transduction import FeatureLexicon, ParseFailure, TreeSet, parse_question
from .ulf import Ulf, print_sexpr
from .world import World, WorldError

TRANSCRIPT_VERSION = 1

GREETING_REPLY = "Hello! Ask me about the blocks on the table."
CLARIFICATION_REPLY = "Sorry, I didn't understand that. Could you rephrase?"
REFERENCE_REPLY = "I'm not sure which block you mean."
FALLBACK_REPLY = "I couldn't work that out."


@dataclass
class SessionEvent:
    seq: int
    clock: float
    kind: str                 # move | ask | answer | noise | error
    payload: dict

    def to_json(self) -> str:
        return json.dumps({"seq": self.seq, "clock": self.clock,
                           "kind": self.kind, "payload": self.payload})

    @classmethod
    def from_json(cls, line: str) -> "SessionEvent":
        d = json.loads(line)
        return cls(seq=d["seq"], clock=d["clock"], kind=d["kind"],
                   payload=d.get("payload", {}))


@dataclass
class ReplayReport:
    asked: int = 0
    mismatches: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


class Session:
    """One dialogue: a world, its episodic memory, and the event log."""

    def __init__(self, world: World, trees: Optional[TreeSet] = None,
                 lex: Optional[FeatureLexicon] = None, clock: float = 0.0,
                 realtime: bool = False):
        if trees is None or lex is None:
            trees, lex = default_grammar()
        self.world = world
        self.trees = trees
        self.lex = lex
        self.memory = em.EpisodicMemory.start(world.scene, clock=clock)
        self.ctx = DiscourseContext()
        self.events: list[SessionEvent] = []
        self.clock = clock
        self.realtime = realtime
        self._origin = time.monotonic() - clock

    # -- internals ----------------------------------------------------------

    def _advance(self, clock: Optional[float]) -> float:
        if clock is None and self.realtime:
            clock = time.monotonic() - self._origin
        if clock is not None:
            self.clock = max(self.clock, clock)
        return self.clock

    def _emit(self, kind: str, payload: dict) -> SessionEvent:
        ev = SessionEvent(seq=len(self.events), clock=self.clock,
                          kind=kind, payload=payload)
        self.events.append(ev)
        return ev

    # -- actions --------------------------------------------------------------

    def handle_move(self, block: str, to: tuple, clock: Optional[float] = None) -> dict:
        """Move a block; returns {ok, noise?, error?}."""
        now = self._advance(clock)
        to = tuple(float(v) for v in to)
        try:
            new_memory, noise = em.record_move(self.memory, block, to, now)
        except WorldError as e:
            self._emit("error", {"action": "move", "block": block,
                                 "to": list(to), "reason": str(e)})
            return {"ok": False, "error": str(e)}
        self.memory = new_memory
        if noise:
            self._emit("noise", {"block": block, "to": list(to)})
            return {"ok": True, "noise": True}
        self.world = wm.World(blocks=self.world.blocks, scene=self.memory.current_scene)
        self._emit("move", {"block": block, "to": list(to)})
        return {"ok": True, "noise": False,
                "token": self.memory.now.name}

    def handle_ask(self, text: str, clock: Optional[float] = None) -> dict:
        """Answer a question; never raises.

        Returns {answer, ulf?, error?}; parse and evaluation problems come
        back as clarification replies with the session left intact.
        """
        now = self._advance(clock)
        self._emit("ask", {"text": text})
        self.memory = em.record_utterance(self.memory, "user", text)
        answer_text, query_ulf = self._answer(text, now)
        self._emit("answer", {"text": answer_text})
        self.memory = em.record_utterance(self.memory, "system", answer_text)
        out = {"answer": answer_text}
        if query_ulf is not None:
            out["ulf"] = print_sexpr(query_ulf)
        return out

    def _answer(self, text: str, now: float) -> tuple[str, Optional[Ulf]]:
        try:
            query = parse_question(text, self.trees, self.lex, ctx=self.ctx)
        except UnresolvedReference:
            return REFERENCE_REPLY, None
        except ParseFailure:
            return CLARIFICATION_REPLY, None
        except Exception:
            return CLARIFICATION_REPLY, None
        if query == ("greeting.gr",):
            return GREETING_REPLY, query
        try:
            frame = hqa.extract_query_frame(query)
            result, plan = hqa.answer(self.memory, frame, self.world, now)
            reply = surface.realize(plan, strict=False)
            register_entities(self.ctx, query)
            if plan.bindings:
                for name in plan.bindings:
                    register_entities(self.ctx, f"|{name}|",
                                      role_map={name: "answer"},
                                      advance_turn=False)
        except Exception:
            return FALLBACK_REPLY, query
        return reply, query

    # -- transcripts ------------------------------------------------------------

    def save_transcript(self, path: str) -> None:
        initial = wm.World(blocks=self.world.blocks,
                           scene=em.reconstruct_scene(self.memory, self.memory.times[0]))
        with open(path, "w", encoding="utf-8") as f:
            header = {"version": TRANSCRIPT_VERSION,
                      "world": wm.world_to_dict(initial)}
            f.write(json.dumps(header) + "\n")
            for ev in self.events:
                f.write(ev.to_json() + "\n")


def load_transcript(path: str) -> tuple[World, list[SessionEvent]]:
    with open(path, encoding="utf-8") as f:
        lines = [ln for ln in f.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty transcript")
    header = json.loads(lines[0])
    if header.get("version") != TRANSCRIPT_VERSION or "world" not in header:
        raise ValueError(f"{path}: bad transcript header")
    world = wm.world_from_dict(header["world"])
    return world, [SessionEvent.from_json(ln) for ln in lines[1:]]


def replay(path: str, trees: Optional[TreeSet] = None,
           lex: Optional[FeatureLexicon] = None) -> ReplayReport:
    """Re-run a transcript and compare fresh answers to the recorded ones."""
    world, events = load_transcript(path)
    start = events[0].clock if events else 0.0
    session = Session(world, trees=trees, lex=lex, clock=start)
    report = ReplayReport()
    pending: Optional[tuple[int, str]] = None    # (seq, fresh answer)
    for ev in events:
        if ev.kind == "move":
            session.handle_move(ev.payload["block"],
                                tuple(ev.payload["to"]), clock=ev.clock)
        elif ev.kind == "ask":
            out = session.handle_ask(ev.payload["text"], clock=ev.clock)
            report.asked += 1
            pending = (ev.seq, out["answer"])
        elif ev.kind == "answer":
            if pending is not None:
                seq, fresh = pending
                if fresh != ev.payload["text"]:
                    report.mismatches.append((seq, ev.payload["text"], fresh))
                pending = None
        # noise / error events need no action on replay
    return report
