import pytest

from blocktalk import data_path, default_grammar
from blocktalk.world import load_world


@pytest.fixture(scope="session")
def grammar():
    return default_grammar()


@pytest.fixture(scope="session")
def trees(grammar):
    return grammar[0]


@pytest.fixture(scope="session")
def lex(grammar):
    return grammar[1]


@pytest.fixture
def row8_world():
    return load_world(data_path("world_row8.json"))


@pytest.fixture
def fig4_world():
    return load_world(data_path("world_fig4.json"))
