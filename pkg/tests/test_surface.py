import pytest
from hypothesis import given, strategies as st

from blocktalk import surface as S
from blocktalk.hqa import AnswerPlan
from blocktalk.ulf import parse_sexpr
from blocktalk.world import SpatialFact


# --- time phrases ---------------------------------------------------------------

@pytest.mark.parametrize("seconds,phrase", [
    (0, "just now"),
    (29, "just now"),
    (30, "30 seconds ago"),
    (44, "40 seconds ago"),
    (45, "50 seconds ago"),
    (89, "90 seconds ago"),
    (90, "two minutes ago"),       # 1.5 min rounds half-up
    (149, "two minutes ago"),
    (150, "three minutes ago"),
    (180, "three minutes ago"),
    (3599, "60 minutes ago"),
    (3600, "one hour ago"),
    (7600, "two hours ago"),
])
def test_time_phrase(seconds, phrase):
    assert S.time_phrase(seconds) == phrase


def test_number_words():
    assert S.number_word(2) == "two"
    assert S.number_word(12) == "twelve"
    assert S.number_word(13) == "13"


# --- person flipping ---------------------------------------------------------------

def test_flip_person_swaps_pronouns():
    u = parse_sexpr("(i.pro ((past move.v) (the.d (|Toyota| block.n))))")
    assert S.flip_person(u) == \
        parse_sexpr("(you.pro ((past move.v) (the.d (|Toyota| block.n))))")


atoms = st.sampled_from(["i.pro", "you.pro", "it.pro", "block.n", "move.v", "past"])
trees_st = st.recursive(atoms,
                        lambda k: st.lists(k, min_size=1, max_size=3).map(tuple),
                        max_leaves=15)


@given(trees_st)
def test_flip_person_is_involution(u):
    assert S.flip_person(S.flip_person(u)) == u


# --- plan rendering -------------------------------------------------------------------

def test_yes_no():
    assert S.realize(AnswerPlan(category="yes-no", polarity="yes")) == "Yes."
    assert S.realize(AnswerPlan(category="yes-no", polarity="no")) == "No."


def test_ident_move_single_and_list():
    p = AnswerPlan(category="ident-which", predicate="move", bindings=("Toyota",))
    assert S.realize(p) == "You moved the Toyota block."
    p = AnswerPlan(category="ident-which", predicate="move",
                   bindings=("Toyota", "Twitter", "Target"))
    assert S.realize(p) == \
        "You moved the Toyota block, the Twitter block and the Target block."


def test_ident_touch():
    p = AnswerPlan(category="ident-which", predicate="touching",
                   subject="Mercedes", bindings=("Toyota",))
    assert S.realize(p) == "The Mercedes block touched the Toyota block."


def test_ident_relation_object():
    p = AnswerPlan(category="ident-which", predicate="on", tense="past",
                   subject="Toyota", bindings=("Texaco",))
    assert S.realize(p) == "The Toyota block was on top of the Texaco block."


def test_ident_wh_subject_lists_names():
    p = AnswerPlan(category="ident-which", predicate="on", tense="pres",
                   bindings=("Starbucks", "Target"))
    assert S.realize(p) == "The Starbucks block and the Target block."


def test_negated_presuppositions():
    p = AnswerPlan(category="ident-which", predicate="on", tense="past",
                   subject="Twitter", negate=True)
    assert S.realize(p) == "The Twitter block wasn't on any block."
    p = AnswerPlan(category="ident-which", predicate="move", negate=True)
    assert S.realize(p) == "You didn't move any block."


def test_where_relation_and_between():
    p = AnswerPlan(category="where", tense="pres", subject="Toyota",
                   relation=SpatialFact("Toyota", "on", ("Texaco",)))
    assert S.realize(p) == "The Toyota block is on top of the Texaco block."
    p = AnswerPlan(category="where", tense="past", subject="Toyota",
                   relation=SpatialFact("Toyota", "between",
                                        ("Mercedes", "Burger King")))
    assert S.realize(p) == ("The Toyota block was between the Mercedes block "
                            "and the Burger King block.")


def test_where_region_fallback():
    p = AnswerPlan(category="where", tense="pres", subject="Toyota",
                   region="front-left")
    assert S.realize(p) == "The Toyota block is at the front left of the table."
    p = AnswerPlan(category="where", tense="pres", subject="Toyota", region="middle")
    assert S.realize(p) == "The Toyota block is near the middle of the table."


def test_when():
    p = AnswerPlan(category="when", subject="Toyota", elapsed=180.0)
    assert S.realize(p) == "You moved the Toyota block three minutes ago."


def test_how_many():
    p = AnswerPlan(category="how-many", predicate="move", count=2,
                   count_noun="block")
    assert S.realize(p) == "You moved two blocks."
    p = AnswerPlan(category="how-many", predicate="move", count=1,
                   count_noun="block")
    assert S.realize(p) == "You moved one block."
    p = AnswerPlan(category="how-many", predicate="move", count=3,
                   count_noun="time", subject="Texaco")
    assert S.realize(p) == "You moved the Texaco block three times."
    p = AnswerPlan(category="how-many", predicate="move", count=0,
                   count_noun="block")
    assert S.realize(p) == "You didn't move any block."


def test_strict_mode_raises_on_gap():
    bad = AnswerPlan(category="yes-no", polarity=None)
    with pytest.raises(S.RealizationGap):
        S.realize(bad, strict=True)
    assert S.realize(bad, strict=False) == "I don't know."
