import pytest
from hypothesis import given, strategies as st

from gene_assembly.errors import GraphStructureError, RelabelError, ValidityError
from gene_assembly.marked_graph import (
    PairRelation,
    SimpleMarkedGraph,
    build_extended_overlap_graph,
    classical_overlap_graph,
    directed_projection,
    directed_properties,
    overlap_projection,
    pair_relationship,
    projection_as_marked,
    relabel,
)
from gene_assembly.oracle import random_extended_legal_string
from gene_assembly.strings import M, parse_gene_string


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
sizes = st.integers(min_value=0, max_value=8)


def edge_set(graph):
    return {frozenset(edge) for edge in graph.edges()}


def test_graph_of_running_string(g_u):
    expected = SimpleMarkedGraph.build(
        {M: "+", 2: "+", 3: "-", 4: "-", 5: "+", 6: "+"},
        undirected=[(M, 3), (3, 2), (2, 6), (2, 5)],
        # 6 -> 3: both occurrences of 6 lie inside the 3-interval
        directed=[(4, 5), (4, 2), (6, 3)],
    )
    assert g_u == expected


def test_graph_of_v(g_v):
    assert g_v == SimpleMarkedGraph.build(
        {M: "+", 2: "+", 3: "+", 4: "+"},
        undirected=[(M, 3), (3, 4), (3, 2)],
        directed=[(2, 4)],
    )


def test_graph_of_w(g_w):
    assert g_w == SimpleMarkedGraph.build(
        {M: "-", 2: "-", 3: "-", 4: "-"},
        undirected=[(2, 3), (2, 4), (3, 4)],
        directed=[(2, M), (3, M), (4, M)],
    )


def test_graph_of_markers_only():
    g = build_extended_overlap_graph(parse_gene_string("b e"))
    assert g.vertices == (M,)
    assert g.signs[M].value == "-"
    assert not g.undirected and not g.directed


def test_graph_needs_a_valid_string():
    with pytest.raises(ValidityError):
        build_extended_overlap_graph(parse_gene_string("2 3 2"))


def test_overlap_projection(g_u, g_w):
    assert edge_set(overlap_projection(g_u)) == {
        frozenset(e) for e in [(M, 3), (3, 2), (2, 6), (2, 5)]
    }
    assert edge_set(overlap_projection(g_w)) == {frozenset(e) for e in [(2, 3), (2, 4), (3, 4)]}
    assert overlap_projection(g_w).degree(M) == 0


def test_directed_projection(g_u, g_v):
    assert set(directed_projection(g_u).edges()) == {(4, 5), (4, 2), (6, 3)}
    assert set(directed_projection(g_v).edges()) == {(2, 4)}


def test_projection_as_marked(g_u):
    overlap = projection_as_marked(g_u, "overlap")
    nesting = projection_as_marked(g_u, "nesting")
    assert not overlap.directed and overlap.undirected == g_u.undirected
    assert not nesting.undirected and nesting.directed == g_u.directed
    assert projection_as_marked(g_u, None) == g_u


def test_directed_properties_of_nested_string():
    g = build_extended_overlap_graph(parse_gene_string("2 3 4 4 3 2"))
    assert g.directed == {(4, 3), (3, 2), (4, 2)}
    props = directed_properties(g)
    assert props.acyclic and props.transitively_closed


def test_directed_properties_detect_cycle_and_missing_closure():
    cyclic = SimpleMarkedGraph.build({2: "-", 3: "-", 4: "-"}, directed=[(2, 3), (3, 4), (4, 2)])
    assert not directed_properties(cyclic).acyclic
    chain = SimpleMarkedGraph.build({2: "-", 3: "-", 4: "-"}, directed=[(2, 3), (3, 4)])
    props = directed_properties(chain)
    assert props.acyclic and not props.transitively_closed


@pytest.mark.parametrize("undirected, directed", [
    ([(2, 2)], []),
    ([], [(2, 2)]),
    ([(2, 5)], []),
    ([], [(2, 3), (3, 2)]),
    ([(2, 3)], [(2, 3)]),
])
def test_structural_violations(undirected, directed):
    with pytest.raises(GraphStructureError):
        SimpleMarkedGraph.build({2: "+", 3: "-"}, undirected, directed)


def test_pair_relationship(u):
    assert pair_relationship(u, 2, 3) is PairRelation.OVERLAP
    assert pair_relationship(u, 4, 5) is PairRelation.NESTED
    assert pair_relationship(u, 4, 6) is PairRelation.DISJOINT


def test_relabel_swap_fixes_w(g_w):
    assert relabel(g_w, {2: 3, 3: 2}) == g_w


def test_relabel_identity(g_u):
    assert relabel(g_u, {}) == g_u


def test_relabel_swap_moves_v(g_v):
    assert relabel(g_v, {2: 3, 3: 2}) != g_v


@pytest.mark.parametrize("mapping", [{M: 2, 2: M}, {2: 3}, {9: 2}])
def test_relabel_rejects_bad_mappings(g_w, mapping):
    with pytest.raises(RelabelError):
        relabel(g_w, mapping)


def test_canonical_key_and_dict(g_v):
    assert g_v.canonical_key() == "2+ 3+ 4+ m+ | 2-3 3-4 3-m | 2>4"
    assert g_v.to_dict()["vertices"][-1] == {"id": M, "sign": "+"}
    assert g_v.to_dict()["directed"] == [[2, 4]]


@given(sizes, seeds)
def test_nesting_is_acyclic_and_closed(k, seed):
    props = directed_properties(build_extended_overlap_graph(random_extended_legal_string(k, seed)))
    assert props.acyclic and props.transitively_closed


@given(sizes, seeds)
def test_overlap_projection_is_the_classical_overlap_graph(k, seed):
    s = random_extended_legal_string(k, seed)
    projected = overlap_projection(build_extended_overlap_graph(s))
    classical = classical_overlap_graph(s)
    assert edge_set(projected) == edge_set(classical)
    assert dict(projected.nodes(data="sign")) == dict(classical.nodes(data="sign"))


@given(sizes, seeds)
def test_every_pair_is_in_exactly_one_case(k, seed):
    s = random_extended_legal_string(k, seed)
    g = build_extended_overlap_graph(s)
    identities = list(s.domain)
    for i, p in enumerate(identities):
        for q in identities[i + 1:]:
            undirected = frozenset((p, q)) in g.undirected
            directed = (p, q) in g.directed or (q, p) in g.directed
            assert not (undirected and directed)
            relation = pair_relationship(s, p, q)
            assert undirected == (relation is PairRelation.OVERLAP)
            assert directed == (relation is PairRelation.NESTED)
