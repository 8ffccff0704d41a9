import random

import pytest
from hypothesis import given, settings, strategies as st

from blocktalk import hqa
from blocktalk import memory as M
from blocktalk import world as W
from blocktalk.memory import TimeToken
from blocktalk.transduction import parse_question
from blocktalk.ulf import parse_sexpr


# --- frame extraction -----------------------------------------------------------

def frame_of(text, trees, lex):
    return hqa.extract_query_frame(parse_question(text, trees, lex))


def test_which_move_frame(trees, lex):
    f = frame_of("Which block did I just move?", trees, lex)
    assert f.category == "ident-which"
    assert f.predicate == "move"
    assert f.subject.kind == "wh"
    assert len(f.modifiers) == 1


def test_embedded_touch_frame(trees, lex):
    f = frame_of("Which blocks did the Mercedes block touch?", trees, lex)
    assert f.category == "ident-which"
    assert f.predicate == "touching"
    assert f.subject.name == "Mercedes"
    assert f.objects[0].kind == "wh"
    assert f.wh_role == "object"


def test_where_frame(trees, lex):
    f = frame_of("Where was the Toyota block before?", trees, lex)
    assert f.category == "where"
    assert f.predicate == "location"
    assert f.subject.name == "Toyota"


def test_how_many_times_frame(trees, lex):
    f = frame_of("How many times did I move the Texaco block?", trees, lex)
    assert f.category == "how-many"
    assert f.count_noun == "time"
    assert f.subject.name == "Texaco"


def test_yesno_relation_frame(trees, lex):
    f = frame_of("Was the Twitter block always behind the Mercedes block?", trees, lex)
    assert f.category == "yes-no"
    assert f.predicate == "behind"
    assert f.objects[0].name == "Mercedes"


def test_ordinal_np_frame(trees, lex):
    f = frame_of("What was the first block that I moved?", trees, lex)
    assert f.np_temporal == ("first", "move")
    assert f.category == "ident-which"


def test_desc_np_terms():
    t = hqa.parse_np(parse_sexpr("(two.d (other.a (plur block.n)))"))
    assert t.kind == "desc" and t.count == 2 and t.other
    t = hqa.parse_np(parse_sexpr("(two.d (red.a (plur block.n)))"))
    assert t.color == "red"


def test_unsupported_shape_raises():
    with pytest.raises(hqa.UnsupportedQuestionShape):
        hqa.extract_query_frame(parse_sexpr("(mystery)"))


# --- constraint compilation --------------------------------------------------------

@pytest.mark.parametrize("adv,kind,detail", [
    ("(adv-f always.a)", "frequency", "always"),
    ("(adv-f ever.a)", "frequency", 1),
    ("(adv-f (three.a (plur time.n)))", "frequency", 3),
    ("(adv-e recent.a)", "unary", "recent"),
    ("(adv-e first.a)", "unary", "first"),
    ("(adv-e last.a)", "unary", "last"),
])
def test_compile_simple(adv, kind, detail):
    c = hqa.compile_constraint(parse_sexpr(adv))
    assert c.kind == kind
    assert (c.n if kind == "frequency" else c.predicate) == detail


def test_compile_mod_a_just():
    c = hqa.compile_constraint(parse_sexpr("(adv-e (just.mod-a recent.a))"))
    assert c.kind == "unary" and c.predicate == "recent" and c.mod_a == "just"


def test_compile_binary():
    c = hqa.compile_constraint(
        parse_sexpr("(adv-s (before.ps ((the.d (|Toyota| block.n)) (past move.v))))"))
    assert c.kind == "binary" and c.relation == "before"
    c = hqa.compile_constraint(parse_sexpr("(adv-e (since.p (the.d beginning.n)))"))
    assert c.relation == "since"


def test_compile_unknown_raises():
    with pytest.raises(hqa.UnknownModifier):
        hqa.compile_constraint(parse_sexpr("(adv-e (wat.p x))"))


# --- randomized memory scaffolding -------------------------------------------------

BLOCKS = ["a", "b", "c", "d"]


def random_memory(rng, max_moves=10):
    positions = {n: (i * 0.3 - 0.45, 0.0, 0.075) for i, n in enumerate(BLOCKS)}
    m = M.EpisodicMemory.start(
        W.Scene(positions=positions, side=0.15, table=(0.75, 0.75)), clock=0.0)
    clock = 0.0
    for _ in range(rng.randrange(max_moves)):
        clock += rng.uniform(1, 120)
        block = rng.choice(BLOCKS)
        to = (rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7),
              rng.choice([0.075, 0.225]))
        try:
            m2, noise = M.record_move(m, block, to, clock)
        except W.WorldError:
            continue
        if not noise:
            m = m2
    return m


# --- filter_times against a set-comprehension oracle ----------------------------------

def oracle_binary(candidates, object_times, relation, any_object):
    def rel(i, j):
        return {"before": i < j, "after": i > j, "since": i >= j,
                "until": i <= j, "during": i == j}[relation]
    if any_object:
        return [t for t in candidates
                if any(rel(t.index, o.index) for o in object_times)]
    anchor = max(o.index for o in object_times)
    return [t for t in candidates if rel(t.index, anchor)]


@settings(deadline=None, max_examples=300)
@given(st.randoms(use_true_random=False),
       st.sampled_from(["before", "after", "since", "until", "during"]),
       st.booleans())
def test_filter_times_binary_matches_oracle(rng, relation, use_ever):
    m = random_memory(rng)
    candidates = list(reversed(m.times))
    k = rng.randrange(len(m.times))
    object_times = tuple(sorted(rng.sample(m.times, k) if k else [],
                                key=lambda t: t.index))
    if not object_times:
        with pytest.raises(hqa.EmptyObjectEvent):
            hqa.filter_times(m, candidates,
                             hqa.TemporalConstraint(kind="binary", relation=relation,
                                                    object="elided", object_times=()))
        return
    c = hqa.TemporalConstraint(kind="binary", relation=relation,
                               object_times=object_times,
                               mod_a="ever" if use_ever else None)
    got = hqa.filter_times(m, candidates, c)
    any_object = use_ever or relation == "during"
    assert got == oracle_binary(candidates, object_times, relation, any_object)


@settings(deadline=None, max_examples=200)
@given(st.randoms(use_true_random=False))
def test_filter_times_unary_matches_oracle(rng):
    m = random_memory(rng)
    candidates = list(reversed(m.times))
    now = m.now.wallclock + rng.uniform(0, 200)
    first = hqa.filter_times(m, candidates,
                             hqa.TemporalConstraint(kind="unary", predicate="first"))
    assert first == [min(candidates, key=lambda t: t.index)]
    last = hqa.filter_times(m, candidates,
                            hqa.TemporalConstraint(kind="unary", predicate="last"))
    assert last == [max(candidates, key=lambda t: t.index)]
    just = hqa.filter_times(m, candidates,
                            hqa.TemporalConstraint(kind="unary", predicate="recent",
                                                   mod_a="just"))
    assert just == last
    recent = hqa.filter_times(m, candidates,
                              hqa.TemporalConstraint(kind="unary", predicate="recent"),
                              now_clock=now)
    evens = [t.index for t in m.times if t.index % 2 == 0]
    cutoff = evens[-2] if len(evens) >= 2 else 0
    expected = [t for t in candidates
                if t.index >= cutoff or now - t.wallclock <= hqa.RECENT_WINDOW_SECONDS]
    assert recent == expected


# --- apply_frequency against a set-comprehension oracle ------------------------------

def oracle_frequency(candidates, facts_by_token, n):
    return [t for t in candidates
            if any(sum(1 for u in candidates
                       if any(g.key == f.key for g in facts_by_token[u.index])) >= n
                   for f in facts_by_token[t.index])]


@settings(deadline=None, max_examples=300)
@given(st.randoms(use_true_random=False),
       st.sampled_from([1, 2, 3, "always"]))
def test_apply_frequency_matches_oracle(rng, n):
    m = random_memory(rng)
    candidates = list(reversed(m.times))
    keys = [("move", b) for b in BLOCKS] + [("rel", "a", "touching", ("b",))]
    facts_by_token = {
        t.index: [hqa.Fact(key=k) for k in rng.sample(keys, rng.randrange(len(keys)))]
        for t in candidates
    }
    c = hqa.TemporalConstraint(kind="frequency", n=n)
    got = hqa.apply_frequency(m, candidates, c, facts_by_token)
    n_eff = len(candidates) if n == "always" else n
    assert got == oracle_frequency(candidates, facts_by_token, n_eff)


# --- the pragmatic default -----------------------------------------------------------

def c_binary(rel):
    return hqa.TemporalConstraint(kind="binary", relation=rel, object="elided")


def test_default_applies_to_bare_past_event():
    f = hqa.QueryFrame(category="ident-which", predicate="move", tense="past")
    assert hqa.infer_default_constraint(f) is not None


def test_default_suppressed_by_frequency_and_unary():
    f = hqa.QueryFrame(category="ident-which", predicate="move", tense="past")
    assert hqa.infer_default_constraint(
        f, [hqa.TemporalConstraint(kind="frequency", n=1)]) is None
    assert hqa.infer_default_constraint(
        f, [hqa.TemporalConstraint(kind="unary", predicate="first")]) is None


def test_default_suppressed_by_range_binaries_only():
    f = hqa.QueryFrame(category="ident-which", predicate="move", tense="past")
    assert hqa.infer_default_constraint(f, [c_binary("since")]) is None
    assert hqa.infer_default_constraint(f, [c_binary("until")]) is None
    assert hqa.infer_default_constraint(f, [c_binary("during")]) is None
    assert hqa.infer_default_constraint(f, [c_binary("before")]) is not None
    assert hqa.infer_default_constraint(f, [c_binary("after")]) is not None


def test_default_suppressed_by_ordinal_and_present_tense():
    f = hqa.QueryFrame(category="ident-which", predicate="move", tense="past",
                       np_temporal=("first", "move"))
    assert hqa.infer_default_constraint(f) is None
    f = hqa.QueryFrame(category="ident-which", predicate="on", tense="pres")
    assert hqa.infer_default_constraint(f) is None


# --- presupposition failure ------------------------------------------------------------

def test_never_stacked_block_negates_presupposition(row8_world, trees, lex):
    m = M.EpisodicMemory.start(row8_world.scene, clock=0.0)
    q = parse_question("What block was the Twitter block on?", trees, lex)
    frame = hqa.extract_query_frame(q)
    result, plan = hqa.answer(m, frame, row8_world, now_clock=10.0)
    assert plan.negate
    assert plan.subject == "Twitter" and plan.predicate == "on"


def test_empty_object_event_is_presupposition_failure(row8_world, trees, lex):
    m = M.EpisodicMemory.start(row8_world.scene, clock=0.0)
    q = parse_question("Did I move the Twitter block after I moved the Toyota block?",
                       trees, lex)
    frame = hqa.extract_query_frame(q)
    result, plan = hqa.answer(m, frame, row8_world, now_clock=10.0)
    assert result.presupposition_failed
    assert plan.polarity == "no"
