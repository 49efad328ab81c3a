import pytest
from hypothesis import given, settings, strategies as st

from gene_assembly.characterize import (
    FailedCondition,
    OrderingCertificate,
    check_success,
    corollary_shape_check,
    enumerate_successful_orderings,
    lift_certificate,
    literal_theorem_check,
    validate_ordering,
)
from gene_assembly.errors import CertificateError, EnumerationCapError, PreconditionError, UndefinedSuccessError
from gene_assembly.graph_rules import GraphRuleKind
from gene_assembly.marked_graph import SimpleMarkedGraph, build_extended_overlap_graph
from gene_assembly.oracle import GRAPH_RULESETS, brute_force_success, random_extended_legal_string
from gene_assembly.strings import M, parse_gene_string


GNR = frozenset({GraphRuleKind.GNR})
SGPR = frozenset({GraphRuleKind.SGPR})
BOTH = frozenset({GraphRuleKind.GNR, GraphRuleKind.SGPR})

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
sizes = st.integers(min_value=0, max_value=5)


def certificate(ordering, kind=GraphRuleKind.SGPR):
    return OrderingCertificate(tuple(ordering), tuple((v, kind) for v in ordering if v != M))


def graph_of(text):
    return build_extended_overlap_graph(parse_gene_string(text))


def test_running_graph_is_not_a_tree_for_sgpr(g_u):
    verdict = check_success(g_u, SGPR)
    assert not verdict.successful
    assert verdict.failed_condition is FailedCondition.NOT_A_TREE
    assert verdict.certificate is None


def test_v_is_successful_for_sgpr(g_v):
    verdict = check_success(g_v, SGPR)
    assert verdict.successful
    assert verdict.certificate.ordering == (2, 4, 3, M)
    assert validate_ordering(g_v, verdict.certificate, SGPR)


def test_blocked_ordering_is_invalid(g_v):
    assert not validate_ordering(g_v, certificate((4, 2, 3, M)))


def test_orderings_of_running_graph(g_u):
    found = enumerate_successful_orderings(g_u, BOTH)
    assert {cert.ordering for cert in found} == {
        (4, 5, 6, 2, 3, M),
        (4, 6, 5, 2, 3, M),
        (6, 4, 5, 2, 3, M),
    }
    for cert in found:
        assert cert.role_map[4] is GraphRuleKind.GNR
        assert cert.forest_roots() == (4, M)
        assert validate_ordering(g_u, cert, BOTH)


def test_running_graph_verdict_matches_orderings(g_u):
    verdict = check_success(g_u, BOTH)
    assert verdict.successful
    assert verdict.certificate in enumerate_successful_orderings(g_u, BOTH)


def test_w_fails_everywhere(g_w):
    assert check_success(g_w, GNR).failed_condition is FailedCondition.UNDIRECTED_EDGE_PRESENT
    assert check_success(g_w, SGPR).failed_condition is FailedCondition.NOT_A_TREE
    assert check_success(g_w, BOTH).failed_condition is FailedCondition.NOT_A_FOREST


def test_gnr_rejects_positive_vertices():
    verdict = check_success(graph_of("2 -2 b e"), GNR)
    assert verdict.failed_condition is FailedCondition.POSITIVE_VERTEX


def test_parity_failure():
    # 2 and 3 overlap, both negative: degree 1 needs a positive sign
    g = graph_of("b e 2 3 2 3")
    assert check_success(g, BOTH).failed_condition is FailedCondition.PARITY


@pytest.mark.parametrize("text, kinds", [("2 b e 2", GNR), ("3 b 2 2 e 3", BOTH), ("3 b 2 2 e 3", GNR)])
def test_edge_out_of_m_blocks_success(text, kinds):
    g = graph_of(text)
    assert g.out_neighbors(M)
    assert literal_theorem_check(g, kinds)
    verdict = check_success(g, kinds)
    assert not verdict.successful
    assert verdict.failed_condition is FailedCondition.M_OUTGOING
    assert not brute_force_success(g, kinds).successful


def test_empty_ruleset():
    assert check_success(graph_of("b e"), []).successful
    assert check_success(graph_of("-e -b"), []).certificate.ordering == (M,)
    assert check_success(graph_of("b 2 2 e"), []).failed_condition is FailedCondition.NO_RULES


def test_success_needs_m():
    g = SimpleMarkedGraph.build({2: "-"})
    with pytest.raises(UndefinedSuccessError):
        check_success(g, BOTH)
    with pytest.raises(UndefinedSuccessError):
        literal_theorem_check(g, BOTH)


@pytest.mark.parametrize("ordering", [(2, 4, 3), (M, 2, 4, 3), (2, 2, 3, M)])
def test_malformed_certificates(g_v, ordering):
    with pytest.raises(CertificateError):
        validate_ordering(g_v, certificate(ordering))


def test_certificate_roles_outside_ruleset(g_v):
    assert not validate_ordering(g_v, certificate((2, 4, 3, M)), GNR)


def test_enumeration_cap(g_u):
    with pytest.raises(EnumerationCapError):
        enumerate_successful_orderings(g_u, BOTH, cap=3)


def test_forest_shape_of_nested_string():
    assert corollary_shape_check(graph_of("2 3 4 4 3 2"))
    assert corollary_shape_check(graph_of("2 3 3 4 4 2 b e"))
    assert corollary_shape_check(graph_of("2 3 3 2 4 4"))


def test_forest_shape_rejects_two_parents_and_open_chains():
    signs = {2: "-", 3: "-", 4: "-"}
    assert not corollary_shape_check(SimpleMarkedGraph.build(signs, directed=[(2, 3), (2, 4)]))
    assert not corollary_shape_check(SimpleMarkedGraph.build(signs, directed=[(2, 3), (3, 4)]))


def test_forest_shape_needs_no_undirected_edges(g_u):
    with pytest.raises(PreconditionError):
        corollary_shape_check(g_u)


def test_lift_certificate_on_v(v, g_v):
    trace = lift_certificate(v, check_success(g_v, SGPR).certificate)
    assert [rule.kind.value for rule in trace.rules] == ["sspr", "sspr", "sspr"]
    assert [rule.p.identity for rule in trace.rules] == [2, 4, 3]
    assert trace.success


def test_lift_certificate_on_running_string(u, g_u):
    trace = lift_certificate(u, check_success(g_u, BOTH).certificate)
    assert trace.success
    assert trace.rules[0].render() == "snr:4"


@settings(max_examples=60, deadline=None)
@given(sizes, seeds, st.sampled_from(GRAPH_RULESETS))
def test_closed_form_agrees_with_search(k, seed, kinds):
    g = build_extended_overlap_graph(random_extended_legal_string(k, seed))
    verdict = check_success(g, kinds)
    assert verdict.successful == brute_force_success(g, kinds).successful
    if verdict.successful:
        assert validate_ordering(g, verdict.certificate, kinds)


@settings(max_examples=40, deadline=None)
@given(sizes, seeds)
def test_literal_conditions_differ_only_when_m_has_out_edges(k, seed):
    g = build_extended_overlap_graph(random_extended_legal_string(k, seed))
    for kinds in GRAPH_RULESETS:
        if literal_theorem_check(g, kinds) != check_success(g, kinds).successful:
            assert GraphRuleKind.GNR in kinds
            assert g.out_neighbors(M)
