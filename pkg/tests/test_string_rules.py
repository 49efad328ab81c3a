import pytest
from hypothesis import given, strategies as st

from gene_assembly.errors import ReductionAborted, RuleApplicationError, RuleSyntaxError, ValidityError
from gene_assembly.oracle import random_extended_legal_string
from gene_assembly.string_rules import (
    RuleInstance,
    RuleKind,
    RuleSystem,
    applicable_rules,
    apply_reduction,
    apply_rule,
    is_terminal_success,
    parse_rule,
    parse_rule_list,
)
from gene_assembly.strings import parse_gene_string


seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
sizes = st.integers(min_value=0, max_value=6)

RUNNING_REDUCTION = "sspr:-6, snr:4, sspr:5, sspr:2, sspr:-3"


def rendered(rules):
    return {rule.render() for rule in rules}


def test_simple_rules_on_running_string(u):
    assert rendered(applicable_rules(u, RuleSystem.SIMPLE)) == {"snr:4", "sspr:-6"}


def test_general_rules_on_running_string(u):
    assert {"snr:4", "spr:-6", "spr:5", "spr:-2"} <= rendered(applicable_rules(u, RuleSystem.GENERAL))


def test_simple_double_rules_need_adjacent_blocks(w):
    found = rendered(applicable_rules(w, RuleSystem.SIMPLE))
    assert found == {"ssdr:2,3", "ssdr:3,4"}
    assert "ssdr:2,4" not in found
    assert "sdr:2,4" in rendered(applicable_rules(w, RuleSystem.GENERAL))


def test_no_rules_on_markers_only():
    assert applicable_rules(parse_gene_string("b e")) == frozenset()


def test_applicability_needs_a_valid_string():
    with pytest.raises(ValidityError):
        applicable_rules(parse_gene_string("2 3 2"))


def test_sspr_on_running_string(u):
    assert apply_rule(u, parse_rule("sspr:-6")).render() == "5 -2 4 4 -5 3 -2 b 3 -e"


def test_snr_on_running_string(u):
    assert apply_rule(u, parse_rule("snr:4")).render() == "5 -2 -5 3 -6 2 6 b 3 -e"


def test_ssdr_on_w(w):
    assert apply_rule(w, parse_rule("ssdr:2,3")).render() == "b 4 4 e"


def test_sdr_swaps_the_middle_contexts():
    s = parse_gene_string("2 5 5 3 6 6 2 7 7 3")
    assert apply_rule(s, parse_rule("sdr:2,3")).render() == "7 7 6 6 5 5"


def test_spr_inverts_markers_inside():
    s = parse_gene_string("2 b 3 3 -2 e")
    assert apply_rule(s, parse_rule("spr:2")).render() == "-3 -3 -b e"


def test_rule_named_by_first_occurrence(u):
    with pytest.raises(RuleApplicationError):
        apply_rule(u, parse_rule("sspr:6"))


def test_inapplicable_rule_names_condition(u):
    with pytest.raises(RuleApplicationError) as info:
        apply_rule(u, parse_rule("snr:3"))
    assert "adjacent" in info.value.condition


def test_running_reduction(u):
    trace = apply_reduction(u, parse_rule_list(RUNNING_REDUCTION))
    assert [step.result.render() for step in trace.steps] == [
        "5 -2 4 4 -5 3 -2 b 3 -e",
        "5 -2 -5 3 -2 b 3 -e",
        "2 3 -2 b 3 -e",
        "-3 b 3 -e",
        "-b -e",
    ]
    assert trace.success
    assert trace.final.render() == "-b -e"
    assert trace.composition_notation() == "sspr:-3 sspr:2 sspr:5 snr:4 sspr:-6"


def test_empty_reduction_is_not_successful(u):
    trace = apply_reduction(u, [])
    assert trace.final == u
    assert not trace.success


def test_reduction_aborts_with_partial_trace(u):
    with pytest.raises(ReductionAborted) as info:
        apply_reduction(u, parse_rule_list("snr:4, snr:4"))
    assert info.value.step == 2
    assert len(info.value.trace.steps) == 1


@pytest.mark.parametrize("text, expected", [("-b -e", True), ("b -e", False), ("e b", True), ("λ", True), ("2 2", False)])
def test_terminal_success(text, expected):
    assert is_terminal_success(parse_gene_string(text)) is expected


def test_parse_rule_list_joins_double_parameters():
    rules = parse_rule_list("sspr:-6,ssdr:2,3,snr:4")
    assert [rule.render() for rule in rules] == ["sspr:-6", "ssdr:2,3", "snr:4"]
    assert rules[1].identities == (2, 3)


@pytest.mark.parametrize("text", ["snr4", "xyz:4", "snr:b", "ssdr:2", "ssdr:2,2", "snr:2,3", "sdr:2,3,4"])
def test_rule_syntax_errors(text):
    with pytest.raises(RuleSyntaxError):
        parse_rule(text)


def test_match_site_is_informative_only(u):
    (located,) = [r for r in applicable_rules(u) if r.kind is RuleKind.SNR]
    assert located == parse_rule("snr:4")
    assert located.match_site == (2, 3)


@given(sizes, seeds, st.sampled_from(list(RuleSystem)))
def test_rules_preserve_validity_and_shrink(k, seed, system):
    s = random_extended_legal_string(k, seed)
    for rule in applicable_rules(s, system):
        result = apply_rule(s, rule)
        assert result.is_extended_legal
        assert len(s) - len(result) == (4 if rule.kind.is_double else 2)
        assert set(s.domain) - set(result.domain) == set(rule.identities)
        assert sum(symbol.is_marker for symbol in result) == 2


@given(sizes, seeds)
def test_simple_rules_are_general_rules(k, seed):
    s = random_extended_legal_string(k, seed)
    general = applicable_rules(s, RuleSystem.GENERAL)
    widened = {RuleKind.SSPR: RuleKind.SPR, RuleKind.SSDR: RuleKind.SDR, RuleKind.SNR: RuleKind.SNR}
    for rule in applicable_rules(s, RuleSystem.SIMPLE):
        assert RuleInstance(widened[rule.kind], rule.p, rule.q) in general


def test_success_strings_have_negative_m():
    for text in ("b e", "e b", "-e -b", "-b -e"):
        s = parse_gene_string(text)
        assert is_terminal_success(s)
        assert s[0].barred == s[1].barred
