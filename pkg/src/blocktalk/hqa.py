"""Historical question answering over episodic memory.

The algorithm: extract a query frame from the logical form, iterate over past
time tokens newest-first, attach focus facts (moves or spatial relations) to
each token, filter the tokens through compiled temporal/frequency constraints,
apply the pragmatic "most recently" default where the question is
under-specified, and package the surviving times and facts into an answer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import memory as em
from . import world as wm
from .memory import EpisodicMemory, MoveFact, TimeToken
from .ulf import Ulf, atom_base, atom_suffix, classify_atom, is_atom, is_name, AtomKind
from .world import SpatialFact, World

RECENT_WINDOW_SECONDS = 60.0
RECENT_WINDOW_EVEN_TOKENS = 2

EVENT_PREDICATES = {"move", "put", "touch"}

_PREP_RELATIONS = {
    "on": "on", "behind": "behind", "in-front-of": "in-front-of",
    "left-of": "left-of", "right-of": "right-of", "near": "near",
    "touching": "touching", "above": "above", "below": "below",
    "between": "between",
}

_NUMBER_WORDS = {"one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
                 "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10,
                 "eleven": 11, "twelve": 12, "once": 1, "twice": 2}


class HqaError(Exception):
    pass


class UnsupportedQuestionShape(HqaError):
    def __init__(self, u: Ulf):
        from .ulf import print_sexpr
        super().__init__(f"unsupported question shape: {print_sexpr(u)}")


class UnknownModifier(HqaError):
    pass


class EmptyObjectEvent(HqaError):
    """A binary constraint's object event never occurred."""

    def __init__(self, clause: Ulf):
        self.clause = clause
        super().__init__("constraint object resolves to no times")


# ---------------------------------------------------------------------------
# terms and frames

@dataclass(frozen=True)
class Term:
    kind: str                    # "name" | "wh" | "desc"
    name: Optional[str] = None   # bare block name
    count: int = 1
    color: Optional[str] = None
    other: bool = False
    plural: bool = False


@dataclass
class QueryFrame:
    category: str                       # ident-which | where | when | how-many | yes-no
    predicate: str                      # move | put | touch | relation tag | location
    subject: Optional[Term] = None
    objects: tuple[Term, ...] = ()
    polarity: str = "pos"
    modifiers: list = field(default_factory=list)    # adv-e/adv-f/adv-s ULFs
    np_temporal: Optional[tuple] = None              # (ordinal, relative-clause verb)
    tense: str = "past"
    count_noun: Optional[str] = None                 # block | time
    wh_role: Optional[str] = None                    # subject | object


@dataclass(frozen=True)
class Fact:
    """One salient fact attached to a time token."""
    key: tuple
    binding: Optional[str] = None     # block name bound to the wh term, if any
    move: Optional[MoveFact] = None
    relation: Optional[SpatialFact] = None


@dataclass
class AnswerSet:
    times: list[TimeToken]
    facts: dict[int, list[Fact]]      # token index -> facts
    presupposition_failed: bool = False

    def bindings(self) -> list[str]:
        out: list[str] = []
        for t in self.times:
            for f in self.facts.get(t.index, []):
                if f.binding and f.binding not in out:
                    out.append(f.binding)
        return out


@dataclass(frozen=True)
class TemporalConstraint:
    kind: str                                # binary | unary | frequency
    relation: Optional[str] = None           # before/after/since/until/during
    object: Optional[Ulf] = None             # object ULF (binary, unresolved)
    object_times: Optional[tuple[TimeToken, ...]] = None
    predicate: Optional[str] = None          # recent | first | last | initial
    n: Optional[object] = None               # int or "always"
    mod_a: Optional[str] = None              # just | right | ever


# ---------------------------------------------------------------------------
# ULF -> frame

def _is_tensed(x: Ulf) -> bool:
    return (isinstance(x, tuple) and len(x) == 2 and is_atom(x[0])
            and classify_atom(x[0]) is AtomKind.TENSE)


def _is_vp(x: Ulf) -> bool:
    return isinstance(x, tuple) and len(x) >= 1 and _is_tensed(x[0])


def _wh_det(x: Ulf) -> Optional[str]:
    if isinstance(x, tuple) and x and is_atom(x[0]):
        base = atom_base(x[0])
        if atom_suffix(x[0]) == "d" and base in ("which", "what", "how-many"):
            return base
    return None


def parse_np(x: Ulf) -> Term:
    if is_atom(x):
        if is_name(x):
            return Term("name", name=x.strip("|"))
        raise UnsupportedQuestionShape(x)
    wh = _wh_det(x)
    if wh:
        return Term("wh", plural=_np_is_plural(x[1]))
    if is_atom(x[0]) and atom_suffix(x[0]) == "d":
        det = atom_base(x[0])
        body = x[1]
        if det in _NUMBER_WORDS or det in ("two", "three", "four"):
            count = _NUMBER_WORDS.get(det, 1)
            color, other = _np_features(body)
            return Term("desc", count=count, color=color, other=other, plural=True)
        if det in ("the", "a", "an", "any"):
            if isinstance(body, tuple) and body and is_atom(body[0]) and is_name(body[0]):
                return Term("name", name=body[0].strip("|"))
            color, other = _np_features(body)
            return Term("desc", count=1, color=color, other=other,
                        plural=_np_is_plural(body))
    raise UnsupportedQuestionShape(x)


def _np_is_plural(body: Ulf) -> bool:
    if isinstance(body, tuple):
        return any(a == "plur" for a in _flat(body))
    return False


def _flat(x: Ulf):
    if is_atom(x):
        yield x
    else:
        for e in x:
            yield from _flat(e)


def _np_features(body: Ulf) -> tuple[Optional[str], bool]:
    color = None
    other = False
    for a in _flat(body):
        if is_atom(a) and atom_suffix(a) == "a":
            base = atom_base(a)
            if base in ("red", "green", "blue"):
                color = base
            elif base == "other":
                other = True
    return color, other


def _strip_question_mark(u: Ulf) -> Ulf:
    if isinstance(u, tuple) and len(u) == 2 and u[-1] in ("?", "!"):
        return u[0]
    return u


def extract_query_frame(u: Ulf) -> QueryFrame:
    """Subject, predicate, objects, category, and modifiers of a query."""
    body = _strip_question_mark(u)
    if not isinstance(body, tuple) or not body:
        raise UnsupportedQuestionShape(u)
    head = body[0]

    if head == "when.pro":
        frame = _parse_clause(body[1])
        frame.category = "when"
        return frame
    if head == "where.pro":
        frame = _parse_clause(body[1])
        frame.category = "where"
        frame.predicate = "location"
        return frame
    if is_atom(head) and atom_base(head) == "what" and atom_suffix(head) == "pro":
        return _parse_ordinal_np_question(body)

    wh = _wh_det(head) if isinstance(head, tuple) else None
    if wh == "how-many":
        frame = _parse_wh_body(body, wh_plural=True)
        frame.category = "how-many"
        frame.count_noun = "time" if "time.n" in set(_flat(head)) else "block"
        return frame
    if wh:
        frame = _parse_wh_body(body, wh_plural=_np_is_plural(head[1]))
        frame.category = "ident-which"
        return frame
    # no fronted wh constituent: yes-no, unless a wh term sits inside the
    # clause ("what block was the Twitter block on")
    frame = _parse_clause(body)
    if any(t.kind == "wh" for t in frame.objects):
        frame.category = "ident-which"
        frame.wh_role = "object"
    elif frame.subject and frame.subject.kind == "wh":
        frame.category = "ident-which"
        frame.wh_role = "subject"
    else:
        frame.category = "yes-no"
    return frame


def _parse_wh_body(body: Ulf, wh_plural: bool) -> QueryFrame:
    wh_term = Term("wh", plural=wh_plural)
    rest = body[1]
    if _is_vp(rest):
        frame = _parse_vp(rest)
        if frame.predicate in EVENT_PREDICATES and not frame.objects:
            frame.subject = wh_term          # theme-normal form
            frame.wh_role = "subject"
        elif any(t.kind == "wh" for t in frame.objects):
            frame.wh_role = "object"
            frame.subject = wh_term if frame.subject is None else frame.subject
        else:
            frame.subject = wh_term
            frame.wh_role = "subject"
        return frame
    # embedded clause: (whNP (NP VP)); the wh term is the verb's object
    frame = _parse_clause(rest)
    frame.objects = frame.objects + (wh_term,)
    frame.wh_role = "object"
    return frame


def _parse_ordinal_np_question(body: Ulf) -> QueryFrame:
    # (What.pro ((past be.v) (the.d (first.a (block.n (that.rel (past move.v)))))))
    try:
        vp = body[1]
        np = vp[1]
        ordinal_adj = np[1][0]
        rel = np[1][1][1]
        verb = atom_base(rel[1][1])
    except (IndexError, TypeError):
        raise UnsupportedQuestionShape(body) from None
    frame = QueryFrame(category="ident-which", predicate=verb,
                       subject=Term("wh"), wh_role="subject",
                       np_temporal=(atom_base(ordinal_adj), verb), tense="past")
    return frame


def _parse_clause(clause: Ulf) -> QueryFrame:
    if not isinstance(clause, tuple) or len(clause) != 2:
        raise UnsupportedQuestionShape(clause)
    subject = parse_np(clause[0])
    frame = _parse_vp(clause[1])
    if frame.subject is None:
        frame.subject = subject
    return frame


def _parse_vp(vp: Ulf) -> QueryFrame:
    if not _is_vp(vp):
        raise UnsupportedQuestionShape(vp)
    tense = "past" if vp[0][0].lower() == "past" else "pres"
    verb = atom_base(vp[0][1])
    frame = QueryFrame(category="yes-no", predicate=verb, tense=tense)
    direct: list[Term] = []
    pp_objects: list[Term] = []
    rel_found: Optional[str] = None
    for part in vp[1:]:
        if isinstance(part, tuple) and part and is_atom(part[0]) \
                and classify_atom(part[0]) is AtomKind.ADV_OP:
            frame.modifiers.append(part)
        elif isinstance(part, tuple) and part and is_atom(part[0]) \
                and atom_suffix(part[0]) == "p":
            rel = _PREP_RELATIONS.get(atom_base(part[0]))
            if rel is None:
                raise UnsupportedQuestionShape(part)
            rel_found = rel
            pp_objects.extend(_parse_pp_objects(rel, part[1]))
        elif is_atom(part) or isinstance(part, tuple):
            direct.append(parse_np(part))
    if verb == "touch":
        frame.predicate = "touching"
        frame.objects = tuple(direct + pp_objects)
    elif verb in ("move", "put"):
        if direct:
            # direct object NP is the theme in "did I move the X block"
            frame.subject = direct.pop(0)
        if rel_found:
            # "did I put X on Y": did X end up on Y at some move time
            frame.predicate = rel_found
            frame.objects = tuple(pp_objects)
        else:
            frame.predicate = "move" if verb == "move" else "put"
            frame.objects = tuple(direct)
    else:
        if rel_found:
            frame.predicate = rel_found
        frame.objects = tuple(direct + pp_objects)
    return frame


def _parse_pp_objects(rel: str, arg: Ulf) -> list[Term]:
    if rel == "between":
        if isinstance(arg, tuple) and len(arg) == 3 and arg[1] == "and.cc":
            return [parse_np(arg[0]), parse_np(arg[2])]
        term = parse_np(arg)
        if term.kind == "desc" and term.count == 2:
            return [term]
        raise UnsupportedQuestionShape(arg)
    return [parse_np(arg)]


# ---------------------------------------------------------------------------
# constraint compilation

def compile_constraint(adv: Ulf) -> TemporalConstraint:
    """adv-e / adv-f / adv-s modifier -> temporal constraint."""
    if not (isinstance(adv, tuple) and len(adv) == 2 and is_atom(adv[0])):
        raise UnknownModifier(adv)
    op, body = adv
    if op == "adv-f":
        return _compile_frequency(body)
    if op in ("adv-e", "adv-s"):
        return _compile_event_constraint(body)
    raise UnknownModifier(adv)


def _compile_frequency(body: Ulf) -> TemporalConstraint:
    if is_atom(body):
        base = atom_base(body)
        if base == "always":
            return TemporalConstraint(kind="frequency", n="always")
        if base == "ever":
            return TemporalConstraint(kind="frequency", n=1)
        if base in _NUMBER_WORDS:
            return TemporalConstraint(kind="frequency", n=_NUMBER_WORDS[base])
    elif isinstance(body, tuple) and len(body) == 2 and is_atom(body[0]):
        n = _NUMBER_WORDS.get(atom_base(body[0]))
        if n is not None:
            return TemporalConstraint(kind="frequency", n=n)
    raise UnknownModifier(body)


_UNARY_PREDICATES = {"recent": "recent", "first": "first", "last": "last",
                     "initial": "initial", "initially": "initial", "now": "last"}

_BINARY_RELATIONS = {"before", "after", "since", "until", "during", "at"}


def _compile_event_constraint(body: Ulf, mod_a: Optional[str] = None) -> TemporalConstraint:
    if is_atom(body):
        pred = _UNARY_PREDICATES.get(atom_base(body))
        if pred is None:
            raise UnknownModifier(body)
        return TemporalConstraint(kind="unary", predicate=pred, mod_a=mod_a)
    if len(body) == 2 and is_atom(body[0]):
        head = body[0]
        if atom_suffix(head) == "mod-a":
            return _compile_event_constraint(body[1], mod_a=atom_base(head))
        base = atom_base(head)
        if atom_suffix(head) in ("p", "ps") and base in _BINARY_RELATIONS:
            rel = "during" if base == "at" else base
            return TemporalConstraint(kind="binary", relation=rel,
                                      object=body[1], mod_a=mod_a)
    raise UnknownModifier(body)


# ---------------------------------------------------------------------------
# time resolution and filtering

def resolve_event_times(m: EpisodicMemory, clause: Ulf, world: Optional[World] = None,
                        subject: Optional[str] = None, depth: int = 8) -> list[TimeToken]:
    """Tokens at which the clause's event or fact holds (ascending order)."""
    if depth <= 0:
        raise HqaError("embedded clause recursion too deep")
    if is_atom(clause):
        if is_name(clause):
            name = clause.strip("|")
            if name.startswith("Now") and name[3:].isdigit():
                return [m.token(clause)]
            return [mv.at for mv in m.moves if mv.block == name]
        if clause == "elided":
            if subject:
                return [mv.at for mv in m.moves if mv.block == subject]
            return [mv.at for mv in m.moves]
        raise UnknownModifier(clause)
    if isinstance(clause, tuple) and len(clause) == 2 and clause[0] == "the.d":
        body = clause[1]
        names = set(_flat(body)) if isinstance(body, tuple) else {body}
        if "beginning.n" in names:
            return [m.times[0]]
        if "move.n" in names:
            return [mv.at for mv in m.moves]
        if isinstance(body, tuple) and body and is_name(body[0]):
            return [mv.at for mv in m.moves if mv.block == body[0].strip("|")]
    # embedded clause, e.g. ((the.d (|Toyota| block.n)) (past move.v))
    frame = _parse_clause(_normalize_clause(clause))
    frame.category = "yes-no"
    result = evaluate(m, frame, world=world,
                      now_clock=m.now.wallclock, depth=depth - 1,
                      apply_default=False)
    return sorted(result.times, key=lambda t: t.index)


def _normalize_clause(clause: Ulf) -> Ulf:
    # accept a bare (NP (past v)) as well as (NP ((past v) ...))
    if isinstance(clause, tuple) and len(clause) == 2 and _is_tensed(clause[1]):
        return (clause[0], (clause[1],))
    return clause


def _relation_holds(rel: str, i: int, j: int) -> bool:
    if rel == "before":
        return i < j
    if rel == "after":
        return i > j
    if rel == "since":
        return i >= j
    if rel == "until":
        return i <= j
    if rel == "during":
        return i == j
    raise UnknownModifier(rel)


def filter_times(m: EpisodicMemory, candidates: list[TimeToken],
                 c: TemporalConstraint, now_clock: Optional[float] = None,
                 world: Optional[World] = None,
                 subject: Optional[str] = None) -> list[TimeToken]:
    """Apply one binary or unary constraint to a candidate token list."""
    if c.kind == "binary":
        times = list(c.object_times) if c.object_times is not None else \
            resolve_event_times(m, c.object, world=world, subject=subject)
        if not times:
            raise EmptyObjectEvent(c.object)
        if c.mod_a == "ever" or c.relation == "during":
            return [t for t in candidates
                    if any(_relation_holds(c.relation, t.index, o.index) for o in times)]
        anchor = max(times, key=lambda t: t.index)   # most recent object event
        return [t for t in candidates if _relation_holds(c.relation, t.index, anchor.index)]
    if c.kind == "unary":
        if not candidates:
            return []
        if c.predicate in ("first", "initial"):
            return [min(candidates, key=lambda t: t.index)]
        if c.predicate == "last":
            return [max(candidates, key=lambda t: t.index)]
        if c.predicate == "recent":
            if c.mod_a in ("just", "right"):
                return [max(candidates, key=lambda t: t.index)]
            now = now_clock if now_clock is not None else m.now.wallclock
            cutoff_index = _recent_even_cutoff(m)
            return [t for t in candidates
                    if t.index >= cutoff_index or now - t.wallclock <= RECENT_WINDOW_SECONDS]
    raise UnknownModifier(c.kind)


def _recent_even_cutoff(m: EpisodicMemory) -> int:
    evens = [t.index for t in m.times if t.index % 2 == 0]
    recent = evens[-RECENT_WINDOW_EVEN_TOKENS:]
    return recent[0] if recent else 0


def apply_frequency(m: EpisodicMemory, candidates: list[TimeToken],
                    c: TemporalConstraint,
                    facts_by_token: dict[int, list[Fact]]) -> list[TimeToken]:
    """Keep tokens whose facts are attached to at least N unique candidate tokens."""
    n = len(candidates) if c.n == "always" else int(c.n)
    counts: dict[tuple, int] = {}
    for t in candidates:
        for f in facts_by_token.get(t.index, []):
            counts[f.key] = counts.get(f.key, 0) + 1
    kept = []
    for t in candidates:
        if any(counts[f.key] >= n for f in facts_by_token.get(t.index, [])):
            kept.append(t)
    return kept


def infer_default_constraint(frame: QueryFrame,
                             constraints: Sequence[TemporalConstraint] = ()
                             ) -> Optional[TemporalConstraint]:
    """The pragmatic "most recently" default for under-specified past questions.

    Frequency adverbs, unary temporal adverbs, temporal ordinals, and
    range-delimiting binary constraints (since/until/during) all make the
    question explicit about its time span, so they suppress the default.
    An open-ended before/after clause does not: "... before I moved it"
    still asks about the most recent qualifying time.
    """
    if frame.np_temporal:
        return None
    if frame.tense != "past":
        return None
    for c in constraints:
        if c.kind in ("frequency", "unary"):
            return None
        if c.kind == "binary" and c.relation in ("since", "until", "during"):
            return None
    if frame.predicate in ("move", "put", "touching") or frame.category == "when":
        return TemporalConstraint(kind="unary", predicate="recent", mod_a="just")
    return None


# ---------------------------------------------------------------------------
# focus facts

def _term_blocks(term: Optional[Term], world: World, exclude: tuple[str, ...] = ()) -> list[str]:
    if term is None or term.kind == "wh":
        return [n for n in sorted(world.blocks) if n not in exclude]
    if term.kind == "name":
        return [term.name]
    # desc term: filter by color / other
    names = [n for n in sorted(world.blocks) if n not in exclude]
    if term.color:
        names = [n for n in names if world.blocks[n].color == term.color]
    return names


def facts_for(frame: QueryFrame, m: EpisodicMemory, world: World,
              t: TimeToken) -> list[Fact]:
    """Salient facts at one token, focused by the query frame."""
    if frame.predicate == "location":
        return []
    if frame.predicate in ("move", "put"):
        out = []
        for mv in em.moves_at(m, t):
            if frame.subject and frame.subject.kind == "name" \
                    and mv.block != frame.subject.name:
                continue
            binding = mv.block if frame.subject is None or frame.subject.kind != "name" else None
            out.append(Fact(key=("move", mv.block), binding=binding or mv.block, move=mv))
        return out
    # spatial relation predicate
    scene = em.reconstruct_scene(m, t)
    out = []
    seen = set()
    counted = (frame.objects and frame.objects[0].kind == "desc"
               and frame.objects[0].count > 1 and frame.predicate != "between")
    for subj in _term_blocks(frame.subject, world):
        if subj not in scene.positions:
            continue
        if counted:
            # e.g. "on two other blocks": the relation must hold against at
            # least `count` distinct objects at this time
            term = frame.objects[0]
            holding = [obj for obj in _term_blocks(term, world, exclude=(subj,))
                       if obj in scene.positions
                       and wm.eval_relation(scene, SpatialFact(subj, frame.predicate, (obj,)))]
            if len(holding) >= term.count:
                out.append(Fact(key=("rel", subj, frame.predicate, "multi"),
                                binding=subj,
                                relation=SpatialFact(subj, frame.predicate,
                                                     (holding[0],))))
            continue
        for objs, binding in _object_combos(frame, world, subj, scene):
            fact = SpatialFact(subj, frame.predicate, objs)
            if fact.key() in seen:
                continue
            if wm.eval_relation(scene, fact):
                seen.add(fact.key())
                bound = binding
                if frame.wh_role == "subject" and (frame.subject is None or frame.subject.kind == "wh"):
                    bound = subj
                out.append(Fact(key=("rel",) + fact.key(), binding=bound, relation=fact))
    return out


def _object_combos(frame: QueryFrame, world: World, subj: str, scene):
    others = [n for n in scene.names() if n != subj]
    if frame.predicate == "between":
        if len(frame.objects) == 2 and all(o.kind == "name" for o in frame.objects):
            pair = (frame.objects[0].name, frame.objects[1].name)
            if all(p in scene.positions for p in pair):
                yield pair, None
            return
        desc = frame.objects[0] if frame.objects else None
        pool = [n for n in others
                if desc is None or desc.color is None
                or world.blocks[n].color == desc.color]
        for a, c in itertools.combinations(sorted(pool), 2):
            yield (a, c), None
        return
    if not frame.objects:
        for obj in others:
            yield (obj,), None
        return
    term = frame.objects[0]
    if term.kind == "name":
        if term.name != subj and term.name in scene.positions:
            yield (term.name,), None
        return
    wh = term.kind == "wh"
    for obj in _term_blocks(term, world, exclude=(subj,)):
        if obj in scene.positions:
            yield (obj,), (obj if wh else None)


# ---------------------------------------------------------------------------
# the main pipeline

def evaluate(m: EpisodicMemory, frame: QueryFrame, world: World,
             now_clock: float, depth: int = 8,
             apply_default: bool = True) -> AnswerSet:
    """Iterate over past tokens, attach focus facts, and filter."""
    if frame.tense == "pres":
        candidates = [m.now]                      # present tense: current scene
    else:
        candidates = list(reversed(m.times))      # newest first
    facts_by_token = {t.index: facts_for(frame, m, world, t) for t in candidates}

    constraints = [compile_constraint(adv) for adv in frame.modifiers]
    subject_name = frame.subject.name if frame.subject and frame.subject.kind == "name" else None

    presupposition_failed = False
    try:
        for c in (c for c in constraints if c.kind == "binary"):
            candidates = filter_times(m, candidates, c, now_clock=now_clock,
                                      world=world, subject=subject_name)
        for c in (c for c in constraints if c.kind == "frequency"):
            candidates = apply_frequency(m, candidates, c, facts_by_token)
        if frame.predicate != "location":
            candidates = [t for t in candidates if facts_by_token[t.index]]
        for c in (c for c in constraints if c.kind == "unary"):
            candidates = filter_times(m, candidates, c, now_clock=now_clock)
        if frame.np_temporal:
            ordinal = frame.np_temporal[0]
            pred = "first" if ordinal in ("first", "initial") else "last"
            candidates = filter_times(m, candidates,
                                      TemporalConstraint(kind="unary", predicate=pred))
        if apply_default:
            default = infer_default_constraint(frame, constraints)
            if default is not None:
                candidates = filter_times(m, candidates, default, now_clock=now_clock)
    except EmptyObjectEvent:
        candidates = []
        presupposition_failed = True

    return AnswerSet(times=candidates,
                     facts={t.index: facts_by_token[t.index] for t in candidates},
                     presupposition_failed=presupposition_failed)


# ---------------------------------------------------------------------------
# answer planning

@dataclass
class AnswerPlan:
    category: str
    tense: str = "past"
    predicate: Optional[str] = None
    subject: Optional[str] = None              # located / touching block name
    bindings: tuple[str, ...] = ()             # names bound to the wh term
    relation: Optional[SpatialFact] = None     # location fact for where answers
    region: Optional[str] = None               # table-region fallback for where
    count: Optional[int] = None
    count_noun: Optional[str] = None
    elapsed: Optional[float] = None            # seconds, for when answers
    polarity: Optional[str] = None             # "yes" | "no"
    negate: bool = False                       # negated-presupposition answer
    negate_object: Optional[str] = None        # named object of the failed event


def negate_presupposition(frame: QueryFrame) -> AnswerPlan:
    """Plan a negative answer denying the question's failed presupposition."""
    subject = frame.subject.name if frame.subject and frame.subject.kind == "name" else None
    return AnswerPlan(category=frame.category, tense=frame.tense,
                      predicate=frame.predicate, subject=subject, negate=True)


def answer(m: EpisodicMemory, frame: QueryFrame, world: World,
           now_clock: float) -> tuple[AnswerSet, AnswerPlan]:
    """Evaluate a query frame and plan its answer."""
    result = evaluate(m, frame, world, now_clock)
    if frame.category == "yes-no":
        plan = AnswerPlan(category="yes-no",
                          polarity="yes" if result.times else "no")
        return result, plan
    if frame.category == "where":
        return result, _plan_where(m, frame, world, result)
    if not result.times and frame.category != "how-many":
        return result, negate_presupposition(frame)
    if frame.category == "when":
        token = result.times[0]
        subject = frame.subject.name if frame.subject and frame.subject.kind == "name" else None
        if subject is None:
            for f in result.facts.get(token.index, []):
                if f.move:
                    subject = f.move.block
                    break
        return result, AnswerPlan(category="when", predicate="move",
                                  subject=subject,
                                  elapsed=max(0.0, now_clock - token.wallclock))
    if frame.category == "how-many":
        if frame.count_noun == "time":
            count = len(result.times)
        else:
            count = len({f.binding for t in result.times
                         for f in result.facts.get(t.index, []) if f.binding})
        subject = frame.subject.name if frame.subject and frame.subject.kind == "name" else None
        return result, AnswerPlan(category="how-many", tense=frame.tense,
                                  predicate=frame.predicate, subject=subject,
                                  count=count, count_noun=frame.count_noun or "block")
    # ident-which
    bindings = tuple(result.bindings())
    if not bindings:
        return result, negate_presupposition(frame)
    subject = frame.subject.name if frame.subject and frame.subject.kind == "name" else None
    return result, AnswerPlan(category="ident-which", tense=frame.tense,
                              predicate=frame.predicate, subject=subject,
                              bindings=bindings)


def _plan_where(m: EpisodicMemory, frame: QueryFrame, world: World,
                result: AnswerSet) -> AnswerPlan:
    subject = frame.subject.name if frame.subject and frame.subject.kind == "name" else None
    if subject is None or not result.times:
        return AnswerPlan(category="where", tense=frame.tense, subject=subject,
                          negate=True)
    token = result.times[0]
    scene = em.reconstruct_scene(m, token)
    facts = wm.describe_location(scene, subject)
    if facts:
        return AnswerPlan(category="where", tense=frame.tense, subject=subject,
                          relation=facts[0])
    return AnswerPlan(category="where", tense=frame.tense, subject=subject,
                      region=wm.table_region(scene, subject))
