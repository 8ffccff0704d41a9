"""Discourse context: referent registry, anaphora resolution, input tidying."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ulf import Ulf, is_atom, names_in

ROLE_WEIGHTS = {"subject": 1.0, "object": 0.5, "answer": 1.5}

FILLER_WORDS = {"ok", "okay", "so", "well", "hmm", "um", "uh",
                "david", "please", "hey"}


class UnresolvedReference(Exception):
    def __init__(self, pronoun: str):
        self.pronoun = pronoun
        super().__init__(f"cannot resolve {pronoun!r} in the current context")


@dataclass
class Mention:
    name: str
    last_turn: int
    weight: float


@dataclass
class DiscourseContext:
    """Recency-ordered registry of mentioned entities, one entry per name."""
    entities: dict[str, Mention] = field(default_factory=dict)
    turn: int = 0
    last_answer: Ulf | None = None

    def salience(self, name: str) -> float:
        m = self.entities[name]
        return 2.0 / (1 + self.turn - m.last_turn) + m.weight

    def ranked(self) -> list[str]:
        return sorted(self.entities, key=self.salience, reverse=True)

    def most_salient(self) -> str | None:
        ranked = self.ranked()
        return ranked[0] if ranked else None


def register_entities(ctx: DiscourseContext, u: Ulf,
                      role_map: dict[str, str] | None = None,
                      advance_turn: bool = True) -> DiscourseContext:
    """Insert or refresh every name atom of u at the current turn."""
    if advance_turn:
        ctx.turn += 1
    role_map = role_map or {}
    for name in names_in(u):
        bare = name.strip("|")
        weight = ROLE_WEIGHTS.get(role_map.get(bare, "object"), 0.5)
        old = ctx.entities.get(bare)
        if old is not None and old.last_turn == ctx.turn:
            weight = max(weight, old.weight)
        ctx.entities[bare] = Mention(bare, ctx.turn, weight)
    return ctx


def _clause_names(u: Ulf, before=None) -> list[str]:
    return [n.strip("|") for n in names_in(u)]


def resolve_anaphora(u: Ulf, ctx: DiscourseContext) -> Ulf:
    """Replace it.pro and (that.d block.n) with the most salient referent.

    Intra-sentential names outrank context entities: in "... before I moved
    it", "it" binds to the block named in the matrix clause when one exists.
    """
    if is_atom(u):
        return u
    local = _clause_names(u)

    def pick() -> str:
        if local:
            return local[0]
        name = ctx.most_salient()
        if name is None:
            raise UnresolvedReference("it")
        return name

    def walk(x: Ulf) -> Ulf:
        if is_atom(x):
            if x == "it.pro":
                return f"|{pick()}|"
            return x
        if x == ("that.d", "block.n") or (len(x) == 2 and x[0] == "that.d"):
            return ("the.d", (f"|{pick()}|", "block.n"))
        return tuple(walk(e) for e in x)

    return walk(u)


def has_pronouns(u: Ulf) -> bool:
    from .ulf import atoms
    for a in atoms(u):
        if a in ("it.pro", "that.d"):
            return True
    return False


_WORD_RE = re.compile(r"[a-z']+|[?!]", re.IGNORECASE)


def tidy_input(text: str) -> str:
    """Strip leading filler words and stuttered repeats.  Idempotent."""
    stripped = text.strip()
    lowered = stripped.lower()
    while True:
        m = re.match(r"^\s*([a-z']+)\s*,?\s*", lowered)
        if not m:
            break
        word = m.group(1)
        rest = lowered[m.end():]
        if word in FILLER_WORDS and rest.strip():
            stripped = stripped[m.end():]
            lowered = rest
        else:
            break
    # collapse immediate word repeats ("the the toyota block")
    words = stripped.split()
    out: list[str] = []
    for w in words:
        if out and w.lower().rstrip(",") == out[-1].lower().rstrip(","):
            continue
        out.append(w)
    return " ".join(out)
