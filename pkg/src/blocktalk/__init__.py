"""blocktalk: a blocks-world dialogue engine with history-aware question
answering.

Submodules:
    ulf          logical-form atoms, S-expression parsing, well-formedness
    transduction feature lexicon + hierarchical pattern transduction
    world        block scenes, spatial relations, move validation
    memory       episodic memory: time tokens, move facts, reconstruction
    discourse    salience tracking, anaphora resolution, input tidying
    hqa          query frames, temporal constraints, answer planning
    surface      English rendering of answer plans
    session      dialogue sessions, transcripts, replay
    server       HTTP/WebSocket service
"""

from importlib import resources


def data_path(name: str) -> str:
    """Absolute path of a bundled data file (grammar, fixture worlds...)."""
    return str(resources.files("blocktalk").joinpath("data", name))


def default_grammar():
    """Load the bundled lexicon and transduction trees."""
    from .transduction import load_lexicon, load_trees
    return load_trees(data_path("trees.lisp")), load_lexicon(data_path("lexicon.lisp"))


__all__ = ["data_path", "default_grammar"]
__version__ = "0.1.0"
