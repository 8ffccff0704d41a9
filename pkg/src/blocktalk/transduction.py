"""Hierarchical pattern transduction: feature annotation, template matching,
and recursive composition of logical-form constituents.

Tree files and lexicon files are S-expressions; see docs/tree-format.md for
the concrete grammar and a worked example.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import ulf as U
from .discourse import DiscourseContext, resolve_anaphora, tidy_input
from .ulf import Ulf, classify_atom, AtomKind

DEFAULT_MAX_DEPTH = 25


class TransductionError(Exception):
    pass


class TreeSyntaxError(TransductionError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateTree(TransductionError):
    pass


class DanglingSubtree(TransductionError):
    pass


class EmptyTreeSet(TransductionError):
    pass


class UnknownTree(TransductionError):
    pass


class DepthExceeded(TransductionError):
    pass


class ParseFailure(Exception):
    def __init__(self, text: str, reason: str = "no parse"):
        self.text = text
        self.reason = reason
        super().__init__(f"could not parse {text!r}: {reason}")


class _NodeFail(Exception):
    """Internal: current alternative does not apply."""


# ---------------------------------------------------------------------------
# lexicon

@dataclass(frozen=True)
class LexEntry:
    features: frozenset[str]
    ulf: Optional[Ulf] = None


@dataclass
class FeatureLexicon:
    entries: dict[str, LexEntry] = field(default_factory=dict)

    def features(self, word: str) -> frozenset[str]:
        e = self.entries.get(word.lower())
        return e.features if e else frozenset()

    def ulf(self, word: str) -> Optional[Ulf]:
        e = self.entries.get(word.lower())
        return e.ulf if e else None

    def phrases(self) -> list[str]:
        """Multiword entries, longest first, for tokenizer merging."""
        multi = [w for w in self.entries if " " in w]
        return sorted(multi, key=lambda w: -len(w.split()))

    def block_names(self) -> dict[str, str]:
        """word -> bare block name, for every name-bearing entry."""
        out = {}
        for word, e in self.entries.items():
            if e.ulf is not None and U.is_atom(e.ulf) and U.is_name(e.ulf) \
                    and "corp-name" in e.features:
                out[word] = e.ulf.strip("|")
        return out


def load_lexicon(path: str) -> FeatureLexicon:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    lex = FeatureLexicon()
    for form, line in _top_level_forms(text):
        if not isinstance(form, tuple) or len(form) < 2 or form[0] != "word":
            raise TreeSyntaxError("expected (word ...) entry", line)
        word = form[1].strip("|").lower()
        features: frozenset[str] = frozenset()
        word_ulf: Optional[Ulf] = None
        for part in form[2:]:
            if not isinstance(part, tuple) or not part:
                raise TreeSyntaxError(f"bad clause in entry for {word!r}", line)
            if part[0] == "features":
                features = frozenset(part[1:])
            elif part[0] == "ulf":
                word_ulf = part[1]
            else:
                raise TreeSyntaxError(f"unknown clause {part[0]!r}", line)
        lex.entries[word] = LexEntry(features=features, ulf=word_ulf)
    return lex


# ---------------------------------------------------------------------------
# tokenization / annotation

@dataclass(frozen=True)
class AnnotatedWord:
    word: str
    features: frozenset[str]


_STRIP_RE = re.compile(r"[,.;:\"()]")


def tokenize(text: str, lex: FeatureLexicon) -> list[str]:
    """Lowercase, strip punctuation (keeping word-internal apostrophes),
    drop sentence-final ?/!, and merge multiword lexicon phrases."""
    text = _STRIP_RE.sub(" ", text.lower())
    text = text.replace("?", " ").replace("!", " ")
    words = text.split()
    phrases = lex.phrases()
    merged: list[str] = []
    i = 0
    while i < len(words):
        for phrase in phrases:
            parts = phrase.split()
            if words[i : i + len(parts)] == parts:
                merged.append(phrase)
                i += len(parts)
                break
        else:
            merged.append(words[i])
            i += 1
    return merged


def annotate(words: Sequence[str], lex: FeatureLexicon) -> list[AnnotatedWord]:
    return [AnnotatedWord(w, lex.features(w)) for w in words]


# ---------------------------------------------------------------------------
# pattern matching

@dataclass(frozen=True)
class Pattern:
    """Sequence of literal words, !feature tests, and bounded wildcards."""
    elements: tuple

    @classmethod
    def from_sexpr(cls, form: Ulf) -> "Pattern":
        if U.is_atom(form):
            form = (form,)
        elems = []
        for e in form:
            if not U.is_atom(e):
                raise TransductionError(f"bad pattern element {e!r}")
            if classify_atom(e) is AtomKind.NUMERAL:
                elems.append(int(e))
            else:
                elems.append(e.strip("|").lower())
        return cls(tuple(elems))


@dataclass(frozen=True)
class MatchResult:
    bindings: tuple[tuple[str, ...], ...]  # one matched span per element


def match_pattern(p: Pattern, ws: Sequence[AnnotatedWord]) -> Optional[MatchResult]:
    """Anchored full match with minimal-first wildcard expansion."""
    spans: list[tuple[str, ...]] = [()] * len(p.elements)

    def rec(pi: int, wi: int) -> bool:
        if pi == len(p.elements):
            return wi == len(ws)
        e = p.elements[pi]
        if isinstance(e, int):
            limit = len(ws) - wi if e == 0 else min(e, len(ws) - wi)
            for take in range(limit + 1):
                spans[pi] = tuple(w.word for w in ws[wi : wi + take])
                if rec(pi + 1, wi + take):
                    return True
            return False
        if wi >= len(ws):
            return False
        w = ws[wi]
        if isinstance(e, str) and e.startswith("!"):
            ok = e[1:] in w.features
        else:
            ok = w.word == e
        if not ok:
            return False
        spans[pi] = (w.word,)
        return rec(pi + 1, wi + 1)

    return MatchResult(tuple(spans)) if rec(0, 0) else None


# ---------------------------------------------------------------------------
# trees

@dataclass(frozen=True)
class TreeNode:
    pattern: Pattern
    children: tuple["TreeNode", ...] = ()
    terminal: Optional[tuple] = None


@dataclass(frozen=True)
class TransductionTree:
    name: str
    nodes: tuple[TreeNode, ...]


@dataclass(frozen=True)
class TreeSet:
    trees: dict[str, TransductionTree]

    def __getitem__(self, name: str) -> TransductionTree:
        try:
            return self.trees[name]
        except KeyError:
            raise UnknownTree(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self.trees


def _top_level_forms(text: str):
    """Yield (form, line) for each top-level S-expression; ;-comments allowed."""
    lines_seen = 1
    rest = text
    while True:
        stripped = rest.lstrip()
        consumed = rest[: len(rest) - len(stripped)]
        lines_seen += consumed.count("\n")
        rest = stripped
        if not rest:
            return
        if rest.startswith(";"):
            nl = rest.find("\n")
            if nl < 0:
                return
            rest = rest[nl + 1:]
            lines_seen += 1
            continue
        try:
            end = U._end_of_first_form(rest)
            form = U.parse_sexpr(rest[:end])
        except U.UlfError as e:
            raise TreeSyntaxError(str(e), lines_seen) from e
        yield form, lines_seen
        lines_seen += rest[:end].count("\n")
        rest = rest[end:]


def _parse_node(form: Ulf, line: int) -> TreeNode:
    if not isinstance(form, tuple) or len(form) != 3 or form[0] != "node":
        raise TreeSyntaxError(f"expected (node pattern directive), got {U.print_sexpr(form)}", line)
    pattern = Pattern.from_sexpr(form[1])
    body = form[2]
    if isinstance(body, tuple) and body and body[0] == "children":
        children = tuple(_parse_node(c, line) for c in body[1:])
        if not children:
            raise TreeSyntaxError("(children ...) needs at least one node", line)
        return TreeNode(pattern=pattern, children=children)
    if not isinstance(body, tuple) or not body or \
            body[0] not in ("template", "subtree", "compose"):
        raise TreeSyntaxError(f"unknown terminal {U.print_sexpr(body)}", line)
    return TreeNode(pattern=pattern, terminal=body)


def load_trees(path: str) -> TreeSet:
    with open(path, encoding="utf-8") as f:
        text = f.read()
    trees: dict[str, TransductionTree] = {}
    for form, line in _top_level_forms(text):
        if not isinstance(form, tuple) or len(form) < 3 or form[0] != "deftree":
            raise TreeSyntaxError("expected (deftree name node...)", line)
        name = form[1]
        if name in trees:
            raise DuplicateTree(name)
        nodes = tuple(_parse_node(n, line) for n in form[2:])
        trees[name] = TransductionTree(name=name, nodes=nodes)
    if not trees:
        raise EmptyTreeSet(path)
    ts = TreeSet(trees)
    for tree in trees.values():
        for node in tree.nodes:
            _check_refs(node, ts)
    return ts


def _terminal_tree_refs(term: tuple):
    if term[0] == "subtree":
        yield term[1]
    elif term[0] == "compose":
        for part in term[1:]:
            if isinstance(part, tuple) and part and part[0] == "dispatch":
                for d in part[1:]:
                    yield d[0]
    elif term[0] == "template":
        yield from _template_tree_refs(term[1])


def _template_tree_refs(t: Ulf):
    if isinstance(t, tuple):
        if len(t) == 3 and t[0] in ("sub", "subs", "opt"):
            yield t[1]
        else:
            for e in t:
                yield from _template_tree_refs(e)


def _check_refs(node: TreeNode, ts: TreeSet) -> None:
    if node.terminal is not None:
        for ref in _terminal_tree_refs(node.terminal):
            if ref not in ts:
                raise DanglingSubtree(ref)
    for child in node.children:
        _check_refs(child, ts)


# ---------------------------------------------------------------------------
# transduction

FAIL = object()


def transduce(tree_name: str, ws: Sequence[AnnotatedWord], trees: TreeSet,
              lex: FeatureLexicon, depth: int = DEFAULT_MAX_DEPTH):
    """Run the input through a tree's ordered alternatives; first match wins.

    Returns a Ulf (or whatever the matching template produced), or FAIL.
    """
    if depth <= 0:
        raise DepthExceeded(tree_name)
    tree = trees[tree_name]
    for node in tree.nodes:
        try:
            return _try_node(node, ws, trees, lex, depth)
        except _NodeFail:
            continue
    return FAIL


def _try_node(node: TreeNode, ws, trees, lex, depth):
    m = match_pattern(node.pattern, ws)
    if m is None:
        raise _NodeFail()
    if node.children:
        for child in node.children:
            try:
                return _try_node(child, ws, trees, lex, depth)
            except _NodeFail:
                continue
        raise _NodeFail()
    return _apply_terminal(node.terminal, m, ws, trees, lex, depth)


def _span(m: MatchResult, ws, k: int) -> tuple[str, ...]:
    if k == 0:
        return tuple(w.word for w in ws)
    return m.bindings[k - 1]


def _dispatch(name: str, span: tuple[str, ...], trees, lex, depth):
    result = transduce(name, annotate(span, lex), trees, lex, depth - 1)
    if result is FAIL:
        raise _NodeFail()
    return result


def _apply_terminal(term: tuple, m: MatchResult, ws, trees, lex, depth):
    kind = term[0]
    if kind == "subtree":
        _, name, k = term
        return _dispatch(name, _span(m, ws, int(k)), trees, lex, depth)
    if kind == "template":
        out = _instantiate(term[1], m, ws, trees, lex, depth)
        if len(out) != 1:
            raise TransductionError("template must produce exactly one form")
        return out[0]
    if kind == "compose":
        dispatch = []
        indices = None
        for part in term[1:]:
            if part[0] == "dispatch":
                dispatch = [(d[0], int(d[1])) for d in part[1:]]
            elif part[0] == "indices":
                indices = part[1]
        results = [_dispatch(name, _span(m, ws, k), trees, lex, depth)
                   for name, k in dispatch]
        if indices is None:
            return tuple(results)   # constituents simply concatenated
        return _fill_indices(indices, results)
    raise TransductionError(f"unknown terminal kind {kind!r}")


def _fill_indices(t: Ulf, results: list) -> Ulf:
    if U.is_atom(t):
        if classify_atom(t) is AtomKind.NUMERAL:
            return results[int(t) - 1]
        return t
    return tuple(_fill_indices(e, results) for e in t)


def _instantiate(t, m: MatchResult, ws, trees, lex, depth) -> list:
    """Evaluate one template element to a list of constituents (for splices)."""
    if U.is_atom(t):
        if classify_atom(t) is AtomKind.NUMERAL:
            return [w for w in _span(m, ws, int(t))]
        return [t]
    if len(t) == 2 and t[0] == "lex":
        span = _span(m, ws, int(t[1]))
        looked = [lex.ulf(w) if lex.ulf(w) is not None else w for w in span]
        if len(looked) != 1:
            raise TransductionError(f"(lex {t[1]}) needs a single-word span, got {span!r}")
        return looked
    if len(t) == 3 and t[0] in ("sub", "subs", "opt"):
        _, name, k = t
        span = _span(m, ws, int(k))
        if t[0] == "opt":
            if not span:
                return []
            return [_dispatch(name, span, trees, lex, depth)]
        result = _dispatch(name, span, trees, lex, depth)
        if t[0] == "subs":
            if not isinstance(result, tuple):
                raise TransductionError(f"(subs {name} ...) result is not a list")
            return list(result)
        return [result]
    out: list = []
    for e in t:
        out.extend(_instantiate(e, m, ws, trees, lex, depth))
    return [tuple(out)]


# ---------------------------------------------------------------------------
# end-to-end question parsing

TOP_TREE = "question-top"


def parse_question(text: str, trees: TreeSet, lex: FeatureLexicon,
                   ctx: Optional[DiscourseContext] = None) -> Ulf:
    """tidy -> tokenize -> annotate -> transduce -> resolve anaphora."""
    tidied = tidy_input(text)
    words = tokenize(tidied, lex)
    if not words:
        raise ParseFailure(text, "empty after tidying")
    result = transduce(TOP_TREE, annotate(words, lex), trees, lex)
    if result is FAIL:
        raise ParseFailure(text)
    if ctx is not None:
        result = resolve_anaphora(result, ctx)
    if not U.well_formed(result):
        raise ParseFailure(text, "ill-formed logical form")
    return result
