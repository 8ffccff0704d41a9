"""Rendering answer plans as English sentences.

The planner (hqa.answer) decides *what* to say; this module decides *how* to
say it: article choice, verb forms, number words, relative time phrases, and
the inversion of person between the asker ("I") and the answerer ("you").
"""

from __future__ import annotations

import math
from typing import Optional

from .hqa import AnswerPlan
from .ulf import Ulf, is_atom
from .world import SpatialFact


class RealizationGap(Exception):
    """Raised in strict mode when no rendering rule applies."""


_NUMBER_WORDS = ["zero", "one", "two", "three", "four", "five", "six",
                 "seven", "eight", "nine", "ten", "eleven", "twelve"]

_RELATION_PHRASES = {
    "on": "on top of",
    "behind": "behind",
    "in-front-of": "in front of",
    "left-of": "to the left of",
    "right-of": "to the right of",
    "near": "near",
    "touching": "touching",
    "above": "above",
    "below": "below",
    "between": "between",
}

_PAST = {"move": "moved", "put": "put", "touch": "touched", "touching": "touched"}
_BASE = {"move": "move", "put": "put", "touch": "touch", "touching": "touch"}


def number_word(n: int) -> str:
    """Spell small counts; larger counts stay as digits."""
    return _NUMBER_WORDS[n] if 0 <= n < len(_NUMBER_WORDS) else str(n)


def block_np(name: str) -> str:
    return f"the {name} block"


def name_list(names: tuple[str, ...] | list[str]) -> str:
    items = [block_np(n) for n in names]
    if len(items) == 1:
        return items[0]
    return ", ".join(items[:-1]) + " and " + items[-1]


def time_phrase(seconds: float) -> str:
    """A relative time description such as "three minutes ago"."""
    if seconds < 30:
        return "just now"
    if seconds < 90:
        tens = int(math.floor(seconds / 10 + 0.5)) * 10
        return f"{number_word(tens) if tens <= 12 else tens} seconds ago"
    if seconds < 3600:
        minutes = int(math.floor(seconds / 60 + 0.5))
        unit = "minute" if minutes == 1 else "minutes"
        return f"{number_word(minutes)} {unit} ago"
    hours = int(math.floor(seconds / 3600 + 0.5))
    unit = "hour" if hours == 1 else "hours"
    return f"{number_word(hours)} {unit} ago"


def flip_person(u: Ulf) -> Ulf:
    """Swap first and second person pronouns (an involution)."""
    if is_atom(u):
        return {"i.pro": "you.pro", "you.pro": "i.pro"}.get(u, u)
    return tuple(flip_person(x) for x in u)


def _be(tense: str, negated: bool = False) -> str:
    verb = "is" if tense == "pres" else "was"
    return verb + ("n't" if negated else "")


def _relation_pp(fact: SpatialFact) -> str:
    phrase = _RELATION_PHRASES[fact.predicate]
    if fact.predicate == "between":
        a, b = fact.objects
        return f"between {block_np(a)} and {block_np(b)}"
    return f"{phrase} {block_np(fact.objects[0])}"


def _sentence(text: str) -> str:
    text = text.strip()
    return text[0].upper() + text[1:] + "."


def realize(plan: AnswerPlan, strict: bool = True) -> str:
    """Render an answer plan as an English sentence."""
    out = _realize(plan)
    if out is None:
        if strict:
            raise RealizationGap(f"no rendering rule for {plan!r}")
        return "I don't know."
    return out


def _realize(plan: AnswerPlan) -> Optional[str]:
    if plan.category == "yes-no":
        if plan.polarity not in ("yes", "no"):
            return None
        return "Yes." if plan.polarity == "yes" else "No."

    if plan.category == "where":
        return _realize_where(plan)

    if plan.category == "when":
        if plan.negate or plan.elapsed is None:
            theme = block_np(plan.subject) if plan.subject else "that block"
            return _sentence(f"you didn't move {theme}")
        theme = block_np(plan.subject) if plan.subject else "a block"
        return _sentence(f"you moved {theme} {time_phrase(plan.elapsed)}")

    if plan.category == "how-many":
        noun = "time" if plan.count_noun == "time" else "block"
        if plan.count is None:
            return None
        if plan.count == 0:
            if noun == "time":
                theme = block_np(plan.subject) if plan.subject else "that block"
                verb = _BASE.get(plan.predicate, "move")
                return _sentence(f"you didn't {verb} {theme}")
            return _sentence("you didn't move any block")
        counted = f"{number_word(plan.count)} {noun}{'s' if plan.count != 1 else ''}"
        if noun == "time":
            theme = block_np(plan.subject) if plan.subject else "it"
            verb = _PAST.get(plan.predicate, "moved")
            return _sentence(f"you {verb} {theme} {counted}")
        verb = _PAST.get(plan.predicate, "moved")
        return _sentence(f"you {verb} {counted}")

    if plan.category == "ident-which":
        return _realize_ident(plan)

    return None


def _realize_ident(plan: AnswerPlan) -> Optional[str]:
    pred = plan.predicate or "move"
    if plan.negate:
        if pred in ("move", "put"):
            return _sentence(f"you didn't {_BASE[pred]} any block")
        if pred == "touching":
            subj = block_np(plan.subject) if plan.subject else "it"
            return _sentence(f"{subj} didn't touch any block")
        # relation predicate with a failed presupposition
        subj = block_np(plan.subject) if plan.subject else "it"
        phrase = _RELATION_PHRASES.get(pred)
        if phrase is None:
            return None
        if pred == "between":
            return _sentence(f"{subj} {_be(plan.tense, True)} between any blocks")
        if pred == "on":
            return _sentence(f"{subj} {_be(plan.tense, True)} on any block")
        return _sentence(f"{subj} {_be(plan.tense, True)} {phrase} any block")
    if not plan.bindings:
        return None
    answers = name_list(plan.bindings)
    if pred in ("move", "put"):
        return _sentence(f"you {_PAST[pred]} {answers}")
    if pred == "touching" and plan.subject:
        return _sentence(f"{block_np(plan.subject)} touched {answers}")
    phrase = _RELATION_PHRASES.get(pred)
    if phrase is None:
        return None
    if plan.subject:
        return _sentence(f"{block_np(plan.subject)} {_be(plan.tense)} {phrase} {answers}")
    # wh term in subject position: answer with the bare name list
    return _sentence(answers)


def _realize_where(plan: AnswerPlan) -> Optional[str]:
    if plan.subject is None:
        return None
    subj = block_np(plan.subject)
    if plan.negate:
        return f"I don't know where {subj} {_be(plan.tense)}."
    if plan.relation is not None:
        return _sentence(f"{subj} {_be(plan.tense)} {_relation_pp(plan.relation)}")
    if plan.region is not None:
        region = plan.region.replace("-", " ")
        if region == "middle":
            return _sentence(f"{subj} {_be(plan.tense)} near the middle of the table")
        return _sentence(f"{subj} {_be(plan.tense)} at the {region} of the table")
    return _sentence(f"{subj} {_be(plan.tense)} somewhere I can't describe")
