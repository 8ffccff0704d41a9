"""S-expression logical forms: reader, printer, atom classification, sanity checks.

A logical form (``Ulf``) is either an atom (a plain string) or a tuple of
sub-forms.  Atoms carry their type in their surface shape: a suffix after the
final dot (``block.n``, ``move.v``), vertical bars for names (``|Toyota|``),
or membership in a closed operator set (``plur``, ``past``, ``adv-e`` ...).
"""

from __future__ import annotations

import enum
import re
from typing import Iterator, Union

Ulf = Union[str, tuple]


class UlfError(Exception):
    """Base class for reader errors."""


class EmptyInput(UlfError):
    pass


class UnbalancedParens(UlfError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unbalanced parentheses at position {position}")


class UnterminatedName(UlfError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"unterminated |...| name starting at position {position}")


class AtomKind(enum.Enum):
    DETERMINER = "d"
    NOUN = "n"
    VERB = "v"
    PREP = "p"
    PREP_ARG = "p-arg"
    ADJ = "a"
    PRONOUN = "pro"
    SENT_PREP = "ps"
    MOD_A = "mod-a"
    NAME = "name"
    TENSE = "tense"
    PLUR = "plur"
    ADV_OP = "adv"
    LOC_RECORD = "loc"
    EPISODIC = "episodic"
    PUNCT = "punct"
    NUMERAL = "numeral"
    OTHER_SUFFIX = "other"
    SYMBOL = "symbol"


_SUFFIX_KINDS = {
    "d": AtomKind.DETERMINER,
    "n": AtomKind.NOUN,
    "v": AtomKind.VERB,
    "p": AtomKind.PREP,
    "p-arg": AtomKind.PREP_ARG,
    "a": AtomKind.ADJ,
    "pro": AtomKind.PRONOUN,
    "ps": AtomKind.SENT_PREP,
    "mod-a": AtomKind.MOD_A,
}

_TENSE_OPS = {"pres", "past"}
_ADV_OPS = {"adv-e", "adv-f", "adv-s"}

_NUMERAL_RE = re.compile(r"^-?\d+(\.\d+)?$")


def is_atom(u: Ulf) -> bool:
    return isinstance(u, str)


def is_name(token: str) -> bool:
    return len(token) >= 2 and token.startswith("|") and token.endswith("|")


def classify_atom(token: str) -> AtomKind:
    """Classify a token by its surface shape.  Total over non-empty tokens."""
    if not token:
        raise ValueError("cannot classify an empty token")
    if is_name(token):
        return AtomKind.NAME
    low = token.lower()
    if low in _TENSE_OPS:
        return AtomKind.TENSE
    if low == "plur":
        return AtomKind.PLUR
    if low in _ADV_OPS:
        return AtomKind.ADV_OP
    if token == "$":
        return AtomKind.LOC_RECORD
    if token == "*":
        return AtomKind.EPISODIC
    if token in ("?", "!"):
        return AtomKind.PUNCT
    if _NUMERAL_RE.match(token):
        return AtomKind.NUMERAL
    if "." in token and not token.endswith("."):
        suffix = low.rsplit(".", 1)[1]
        return _SUFFIX_KINDS.get(suffix, AtomKind.OTHER_SUFFIX)
    return AtomKind.SYMBOL


def atom_suffix(token: str) -> str | None:
    """The type suffix of an atom ('n', 'v', ...), or None."""
    if is_name(token) or "." not in token or token.endswith("."):
        return None
    return token.lower().rsplit(".", 1)[1]


def atom_base(token: str) -> str:
    """The lexical part of a suffixed atom: 'move.v' -> 'move'."""
    if atom_suffix(token) is not None:
        return token.rsplit(".", 1)[0].lower()
    return token


def canonical_numeral(token: "str | float | int") -> str:
    """Decimal meters with at most 4 fractional digits, no trailing zeros."""
    token = str(token)
    if "." not in token:
        return token
    text = f"{float(token):.4f}".rstrip("0").rstrip(".")
    return text if text not in ("", "-") else "0"


def _tokenize(text: str) -> Iterator[tuple[str, int]]:
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c, i
            i += 1
        elif c == "|":
            j = text.find("|", i + 1)
            if j < 0:
                raise UnterminatedName(i)
            yield text[i : j + 1], i
            i = j + 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()|":
                j += 1
            yield text[i:j], i
            i = j


def parse_sexpr(text: str) -> Ulf:
    """Read one S-expression.  Raises EmptyInput / UnbalancedParens / UnterminatedName."""
    stack: list[list] = []
    result: Ulf | None = None
    for tok, pos in _tokenize(text):
        if result is not None:
            raise UnbalancedParens(pos)
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise UnbalancedParens(pos)
            done = tuple(stack.pop())
            if stack:
                stack[-1].append(done)
            else:
                result = done
        else:
            atom = tok
            if classify_atom(atom) is AtomKind.NUMERAL:
                atom = canonical_numeral(atom)
            if stack:
                stack[-1].append(atom)
            else:
                result = atom
    if stack:
        raise UnbalancedParens(len(text))
    if result is None:
        raise EmptyInput("no expression in input")
    return result


def parse_sexprs(text: str) -> list[Ulf]:
    """Read a whole file worth of S-expressions."""
    forms = []
    rest = text
    offset = 0
    while True:
        stripped = rest.lstrip()
        if not stripped or stripped.startswith(";"):
            # allow ;-comments between top-level forms
            nl = stripped.find("\n")
            if stripped.startswith(";") and nl >= 0:
                cut = len(rest) - len(stripped) + nl + 1
                offset += cut
                rest = rest[cut:]
                continue
            break
        end = _end_of_first_form(stripped)
        forms.append(parse_sexpr(stripped[:end]))
        cut = len(rest) - len(stripped) + end
        offset += cut
        rest = rest[cut:]
    return forms


def _end_of_first_form(text: str) -> int:
    depth = 0
    for tok, pos in _tokenize(text):
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1
            if depth == 0:
                return pos + 1
            if depth < 0:
                raise UnbalancedParens(pos)
        elif depth == 0:
            return pos + len(tok)
    raise UnbalancedParens(len(text))


def print_sexpr(u: Ulf) -> str:
    """Canonical single-space-separated parenthesized form."""
    if is_atom(u):
        if classify_atom(u) is AtomKind.NUMERAL:
            return canonical_numeral(u)
        return u
    return "(" + " ".join(print_sexpr(x) for x in u) + ")"


def atoms(u: Ulf) -> Iterator[str]:
    """All atoms of a tree, left to right."""
    if is_atom(u):
        yield u
    else:
        for x in u:
            yield from atoms(x)


def names_in(u: Ulf) -> list[str]:
    """Distinct |...| name atoms in surface order, time tokens excluded."""
    seen = []
    for a in atoms(u):
        if classify_atom(a) is AtomKind.NAME and not re.match(r"^\|Now\d+\|$", a):
            if a not in seen:
                seen.append(a)
    return seen


def replace_atom(u: Ulf, old: str, new: Ulf) -> Ulf:
    """Fresh tree with every occurrence of an atom replaced."""
    if is_atom(u):
        return new if u == old else u
    return tuple(replace_atom(x, old, new) for x in u)


def _is_verb_expr(u: Ulf) -> bool:
    if is_atom(u):
        return classify_atom(u) is AtomKind.VERB
    return len(u) > 0 and _is_verb_expr(u[0])


def _is_noun_expr(u: Ulf) -> bool:
    if is_atom(u):
        return classify_atom(u) is AtomKind.NOUN
    if not u:
        return False
    return _is_noun_expr(u[0]) or _is_noun_expr(u[-1])


def well_formed(u: Ulf) -> bool:
    """Shallow sanity layer: operator arities and argument categories.

    Checks that tense operators wrap exactly one verb expression, plur wraps
    a noun expression, adv-* wraps exactly one constituent, and ($ loc ...)
    carries exactly three numerals.
    """
    if is_atom(u):
        return True
    if len(u) == 0:
        return False
    head = u[0]
    if is_atom(head):
        kind = classify_atom(head)
        if kind is AtomKind.TENSE:
            if len(u) != 2 or not _is_verb_expr(u[1]):
                return False
        elif kind is AtomKind.PLUR:
            if len(u) != 2 or not _is_noun_expr(u[1]):
                return False
        elif kind is AtomKind.ADV_OP:
            if len(u) != 2:
                return False
        elif kind is AtomKind.LOC_RECORD:
            if len(u) != 5 or u[1] != "loc":
                return False
            if any(classify_atom(x) is not AtomKind.NUMERAL
                   for x in u[2:] if is_atom(x)):
                return False
            if any(not is_atom(x) for x in u[2:]):
                return False
    # tense atoms may only appear as the head of a (tense verb) pair
    for i, x in enumerate(u):
        if is_atom(x) and classify_atom(x) in (AtomKind.TENSE, AtomKind.PLUR) and i != 0:
            return False
    return all(well_formed(x) for x in u)


def loc_record(x: float, y: float, z: float) -> Ulf:
    """($ loc x y z) with canonical numerals."""
    return ("$", "loc",
            canonical_numeral(f"{x:.4f}"),
            canonical_numeral(f"{y:.4f}"),
            canonical_numeral(f"{z:.4f}"))
