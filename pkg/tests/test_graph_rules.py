import pytest
from hypothesis import given, strategies as st

from gene_assembly.errors import GraphRuleError, ReductionAborted, RuleSyntaxError
from gene_assembly.graph_rules import (
    COND_INCOMING_EDGE,
    COND_SIGN,
    COND_UNDIRECTED_DEGREE,
    GraphRuleInstance,
    GraphRuleKind,
    apply_graph_reduction,
    apply_graph_rule,
    applicable_graph_rules,
    explain_graph_success,
    format_ruleset,
    is_graph_success,
    parse_graph_rule,
    parse_graph_rule_list,
    parse_ruleset,
)
from gene_assembly.marked_graph import SimpleMarkedGraph, build_extended_overlap_graph
from gene_assembly.oracle import random_extended_legal_string, verify_simulation
from gene_assembly.strings import M


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
sizes = st.integers(min_value=0, max_value=8)


def test_applicable_rules_on_running_graph(g_u):
    assert {rule.render() for rule in applicable_graph_rules(g_u)} == {"gnr:4", "sgpr:6"}


def test_sgpr_6_on_running_graph(g_u, u):
    result = apply_graph_rule(g_u, parse_graph_rule("sgpr:6"))
    assert result == SimpleMarkedGraph.build(
        {M: "+", 2: "-", 3: "-", 4: "-", 5: "+"},
        undirected=[(M, 3), (3, 2), (2, 5)],
        directed=[(4, 5), (4, 2)],
    )


def test_gnr_4_removes_vertex_and_edges(g_u):
    result = apply_graph_rule(g_u, parse_graph_rule("gnr:4"))
    assert 4 not in result.signs
    assert result.directed == {(6, 3)}
    assert result.signs == {v: s for v, s in g_u.signs.items() if v != 4}


@pytest.mark.parametrize("rule, condition", [
    ("sgpr:5", COND_INCOMING_EDGE),
    ("gnr:3", COND_UNDIRECTED_DEGREE),
    ("gnr:2", COND_SIGN),
    ("sgpr:2", COND_UNDIRECTED_DEGREE),
])
def test_inapplicable_graph_rules(g_u, rule, condition):
    with pytest.raises(GraphRuleError) as info:
        apply_graph_rule(g_u, parse_graph_rule(rule))
    assert info.value.condition == condition


def test_missing_vertex(g_u):
    with pytest.raises(GraphRuleError):
        apply_graph_rule(g_u, GraphRuleInstance(GraphRuleKind.GNR, 9))


def test_rules_never_touch_m():
    with pytest.raises(RuleSyntaxError):
        parse_graph_rule("gnr:m")


def test_certificate_replay_on_v(g_v):
    trace = apply_graph_reduction(g_v, parse_graph_rule_list("sgpr:2, sgpr:4, sgpr:3"))
    assert trace.success
    assert trace.final == SimpleMarkedGraph.build({M: "-"})
    assert trace.composition_notation() == "sgpr:3 sgpr:4 sgpr:2"


def test_blocked_ordering_on_v(g_v):
    with pytest.raises(ReductionAborted) as info:
        apply_graph_reduction(g_v, parse_graph_rule_list("sgpr:4, sgpr:2, sgpr:3"))
    assert info.value.step == 1
    assert info.value.cause.condition == COND_INCOMING_EDGE


def test_graph_success():
    assert is_graph_success(SimpleMarkedGraph.build({M: "-"}))
    assert not is_graph_success(SimpleMarkedGraph.build({M: "+"}))
    assert not is_graph_success(SimpleMarkedGraph.build({M: "-", 2: "-"}))
    assert explain_graph_success(SimpleMarkedGraph.build({2: "-"})) == (False, "no m present")


def test_ruleset_parsing():
    assert parse_ruleset("gnr,sgpr") == {GraphRuleKind.GNR, GraphRuleKind.SGPR}
    assert parse_ruleset("{Gnr}") == {GraphRuleKind.GNR}
    assert parse_ruleset("none") == frozenset()
    assert format_ruleset(parse_ruleset("sgpr, gnr")) == "{Gnr, sGpr}"
    with pytest.raises(RuleSyntaxError):
        parse_ruleset("gdr")


def test_outgoing_edges_do_not_block():
    g = SimpleMarkedGraph.build({M: "-", 2: "-", 3: "-"}, directed=[(2, 3), (2, M)])
    assert {rule.render() for rule in applicable_graph_rules(g)} == {"gnr:2"}


@given(sizes, seeds)
def test_string_rules_are_simulated_by_graph_rules(k, seed):
    report = verify_simulation(random_extended_legal_string(k, seed))
    assert report.violations == []


@given(sizes, seeds)
def test_graph_rules_keep_graphs_well_formed(k, seed):
    g = build_extended_overlap_graph(random_extended_legal_string(k, seed))
    for rule in applicable_graph_rules(g):
        result = apply_graph_rule(g, rule)
        assert set(result.signs) == set(g.signs) - {rule.vertex}
        assert result.has_m
