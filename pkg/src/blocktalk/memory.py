"""Symbolic dialogue context: time tokens, move facts, scene reconstruction.

Time is linear and discrete.  |Now0| is session start; each recorded move
appends two tokens, an odd in-progress token and an even finished token.
Past scenes are never stored: they are rebuilt by undoing moves backwards
from the current scene.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

from . import world as wm
from .ulf import Ulf, loc_record, print_sexpr
from .world import Scene, UnknownBlock, Vec

DEFAULT_NOISE_THRESHOLD = 0.02  # meters


class UnknownTime(Exception):
    pass


@dataclass(frozen=True)
class TimeToken:
    index: int
    wallclock: float

    @property
    def name(self) -> str:
        return f"|Now{self.index}|"

    @property
    def phase(self) -> str:
        if self.index == 0:
            return "init"
        return "in-progress" if self.index % 2 == 1 else "finished"


@dataclass(frozen=True)
class MoveFact:
    block: str
    src: Vec
    dst: Vec
    at: TimeToken  # the odd, in-progress token

    def to_ulf(self) -> Ulf:
        prop = (f"|{self.block}|",
                (("past", "move.v"),
                 ("from.p-arg", loc_record(*self.src)),
                 ("to.p-arg", loc_record(*self.dst))))
        return (prop, "*", self.at.name)


@dataclass(frozen=True)
class Utterance:
    speaker: str
    content: str
    at: TimeToken


@dataclass(frozen=True)
class EpisodicMemory:
    times: tuple[TimeToken, ...]
    moves: tuple[MoveFact, ...]
    utterances: tuple[Utterance, ...]
    current_scene: Scene
    noise_threshold: float = DEFAULT_NOISE_THRESHOLD

    @classmethod
    def start(cls, scene: Scene, clock: float = 0.0,
              noise_threshold: float = DEFAULT_NOISE_THRESHOLD) -> "EpisodicMemory":
        return cls(times=(TimeToken(0, clock),), moves=(), utterances=(),
                   current_scene=scene, noise_threshold=noise_threshold)

    @property
    def now(self) -> TimeToken:
        return self.times[-1]

    def token(self, ref: "int | str | TimeToken") -> TimeToken:
        """Look a token up by index, |NowK| name, or identity."""
        if isinstance(ref, TimeToken):
            ref = ref.index
        if isinstance(ref, str):
            name = ref.strip("|")
            if not name.startswith("Now") or not name[3:].isdigit():
                raise UnknownTime(ref)
            ref = int(name[3:])
        if not 0 <= ref < len(self.times):
            raise UnknownTime(ref)
        return self.times[ref]


class RecordResult(NamedTuple):
    memory: EpisodicMemory
    noise: bool


def record_move(m: EpisodicMemory, block: str, to: Vec, clock: float) -> RecordResult:
    """Register a block move: two new time tokens and one move fact.

    Displacements below the noise threshold are ignored and the input memory
    is returned unchanged with the noise flag set.
    """
    src = m.current_scene.position(block)
    if wm._dist(src, to) < m.noise_threshold:
        return RecordResult(m, True)
    new_scene = wm.apply_move(m.current_scene, block, to)
    k = len(m.times)
    in_progress = TimeToken(k, clock)
    finished = TimeToken(k + 1, clock)
    fact = MoveFact(block=block, src=src, dst=to, at=in_progress)
    new = replace(m,
                  times=m.times + (in_progress, finished),
                  moves=m.moves + (fact,),
                  current_scene=new_scene)
    return RecordResult(new, False)


def record_utterance(m: EpisodicMemory, speaker: str, content: str) -> EpisodicMemory:
    """Attach an utterance to the latest existing token."""
    return replace(m, utterances=m.utterances + (Utterance(speaker, content, m.now),))


def reconstruct_scene(m: EpisodicMemory, t: TimeToken) -> Scene:
    """Scene at token t, by backtracking moves from the current scene.

    At an in-progress token the move in flight is treated as not yet applied,
    so the block sits at its from-location.
    """
    t = m.token(t)
    scene = m.current_scene
    for move in reversed(m.moves):
        if move.at.index >= t.index:
            scene = wm.invert_move(scene, move.block, move.src)
    return scene


def moves_at(m: EpisodicMemory, t: TimeToken) -> list[MoveFact]:
    t = m.token(t)
    return [mv for mv in m.moves if mv.at.index == t.index]


def facts_at(m: EpisodicMemory, t: TimeToken,
             block: Optional[str] = None,
             predicate: Optional[str] = None) -> list:
    """Move facts attached to t plus spatial relations holding at t.

    Optionally narrowed to one focus block and/or one relation tag.
    """
    t = m.token(t)
    facts: list = []
    for mv in moves_at(m, t):
        if block is None or mv.block == block:
            facts.append(mv)
    scene = reconstruct_scene(m, t)
    subjects = [block] if block else scene.names()
    for subj in subjects:
        for f in wm.relations_holding(scene, subj):
            if predicate is None or f.predicate == predicate:
                facts.append(f)
    return facts


def elapsed(m: EpisodicMemory, t: TimeToken, now_clock: float) -> float:
    """Wall-clock seconds between token t and the given clock."""
    t = m.token(t)
    return now_clock - t.wallclock


def ordering(t1: TimeToken, t2: TimeToken) -> str:
    if t1.index < t2.index:
        return "before"
    if t1.index > t2.index:
        return "after"
    return "same"


def dump_sexpr_lines(m: EpisodicMemory) -> list[str]:
    """One stored fact per line, in the (proposition * |NowK|) notation."""
    lines = [print_sexpr(mv.to_ulf()) for mv in m.moves]
    for u in m.utterances:
        prop = (f"|{u.speaker}|", ("past", "say.v"), f"|{u.content}|")
        lines.append(print_sexpr((prop, "*", u.at.name)))
    return lines
