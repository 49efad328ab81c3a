import pytest

from gene_assembly.marked_graph import build_extended_overlap_graph
from gene_assembly.strings import parse_gene_string


RUNNING_U = "5 -2 4 4 -5 3 -6 2 6 b 3 -e"
STRING_V = "-4 2 3 -2 4 -e -3 b"
STRING_W = "b 2 3 4 2 3 4 e"


@pytest.fixture
def u():
    return parse_gene_string(RUNNING_U)


@pytest.fixture
def v():
    return parse_gene_string(STRING_V)


@pytest.fixture
def w():
    return parse_gene_string(STRING_W)


@pytest.fixture
def g_u(u):
    return build_extended_overlap_graph(u)


@pytest.fixture
def g_v(v):
    return build_extended_overlap_graph(v)


@pytest.fixture
def g_w(w):
    return build_extended_overlap_graph(w)
