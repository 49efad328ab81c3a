"""
Brute-force ground truth for the rewriting systems.

Generates extended legal strings (exhaustively for small k, or seeded at
random), searches every rule choice with memoization on canonical state
text, and checks the simulation lemmas and success characterizations
against that search.
"""

import logging
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Tuple, Union

from gene_assembly.characterize import (
    check_success,
    enumerate_successful_orderings,
    literal_theorem_check,
    validate_ordering,
)
from gene_assembly.config import DEFAULT_SAMPLE_SEED, DEFAULT_SETTINGS, OracleSettings
from gene_assembly.errors import EnumerationCapError, PreconditionError, SearchInconclusive, UndefinedSuccessError
from gene_assembly.graph_rules import (
    GraphReductionTrace,
    GraphRuleInstance,
    GraphRuleKind,
    apply_graph_reduction,
    apply_graph_rule,
    applicable_graph_rules,
    explain_graph_success,
    format_ruleset,
    is_applicable,
)
from gene_assembly.marked_graph import (
    PairRelation,
    SimpleMarkedGraph,
    build_extended_overlap_graph,
    classical_overlap_graph,
    directed_properties,
    overlap_projection,
    pair_relationship,
)
from gene_assembly.string_rules import (
    ReductionTrace,
    RuleKind,
    RuleSystem,
    all_applicable_rules,
    apply_reduction,
    apply_rule,
    is_terminal_success,
)
from gene_assembly.strings import M, GeneString, GeneSymbol, identity_sort_key


logger = logging.getLogger(__name__)

GRAPH_RULESETS: Tuple[FrozenSet[GraphRuleKind], ...] = (
    frozenset(),
    frozenset({GraphRuleKind.GNR}),
    frozenset({GraphRuleKind.SGPR}),
    frozenset({GraphRuleKind.GNR, GraphRuleKind.SGPR}),
)
MARKER_PRESERVING_KINDS = frozenset({RuleKind.SNR, RuleKind.SSPR})


class BarMode(str, Enum):
    ALL = "all-combinations"
    UNBARRED = "unbarred-only"
    RANDOM = "random"


# ============================================================================
# DATA STRUCTURES
# ============================================================================


@dataclass(frozen=True)
class InstanceFamily:
    """Extended legal strings over pointer identities 2..k+1."""
    num_pointer_identities: int
    include_markers: bool = True
    bar_mode: BarMode = BarMode.ALL

    def __post_init__(self):
        if self.num_pointer_identities < 0:
            raise ValueError("the number of pointer identities must be >= 0")
        object.__setattr__(self, "bar_mode", BarMode(self.bar_mode))

    @property
    def length(self) -> int:
        return 2 * self.num_pointer_identities + (2 if self.include_markers else 0)

    def skeleton_count(self) -> int:
        return math.factorial(self.length) // 2 ** self.num_pointer_identities

    def size(self) -> int:
        """Number of strings ``enumerate`` yields."""
        bars = 2 ** self.length if self.bar_mode is BarMode.ALL else 1
        return self.skeleton_count() * bars

    def alphabet(self) -> List[Union[int, str]]:
        items: List[Union[int, str]] = []
        for value in range(2, self.num_pointer_identities + 2):
            items.extend((value, value))
        if self.include_markers:
            items.extend(("b", "e"))
        return items

    def enumerate(self, cap: int = DEFAULT_SETTINGS.exhaustive_cap) -> Iterator[GeneString]:
        if self.num_pointer_identities > cap:
            raise EnumerationCapError(self.num_pointer_identities, cap, "k")
        if self.bar_mode is BarMode.RANDOM:
            raise ValueError("random bar mode only applies to sampling")
        for skeleton in _multiset_permutations(Counter(self.alphabet()), self.length):
            if self.bar_mode is BarMode.UNBARRED:
                yield GeneString(tuple(GeneSymbol(v) for v in skeleton))
                continue
            for bars in product((False, True), repeat=self.length):
                yield GeneString(tuple(GeneSymbol(v, bar) for v, bar in zip(skeleton, bars)))

    def sample(self, seed: int) -> GeneString:
        rng = random.Random(seed)
        items = self.alphabet()
        rng.shuffle(items)
        if self.bar_mode is BarMode.UNBARRED:
            return GeneString(tuple(GeneSymbol(v) for v in items))
        return GeneString(tuple(GeneSymbol(v, rng.random() < 0.5) for v in items))


@dataclass(frozen=True)
class SearchResult:
    successful: bool
    witness: Optional[Union[ReductionTrace, GraphReductionTrace]] = None
    states_explored: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "successful": self.successful,
            "witness": self.witness.to_dict() if self.witness else None,
            "states_explored": self.states_explored,
        }


def _symbol_order(value: Union[int, str]) -> Tuple[int, Any]:
    return (1, value) if isinstance(value, str) else (0, value)


def _multiset_permutations(counts: Counter, length: int) -> Iterator[Tuple[Union[int, str], ...]]:
    """Distinct arrangements of a multiset, in lexicographic order."""
    if length == 0:
        yield ()
        return
    for value in sorted(counts, key=_symbol_order):
        if counts[value] == 0:
            continue
        counts[value] -= 1
        for rest in _multiset_permutations(counts, length - 1):
            yield (value,) + rest
        counts[value] += 1


# ============================================================================
# GENERATION
# ============================================================================


def enumerate_extended_legal_strings(
    k: int, cap: int = DEFAULT_SETTINGS.exhaustive_cap
) -> Iterator[GeneString]:
    """Every extended legal string over identities 2..k+1 with all bar assignments."""
    return InstanceFamily(k).enumerate(cap)


def random_extended_legal_string(k: int, seed: int) -> GeneString:
    """Uniform over skeletons and bar assignments; deterministic per seed."""
    return InstanceFamily(k, bar_mode=BarMode.RANDOM).sample(seed)


def instance_stream(
    k: int,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SAMPLE_SEED,
    settings: OracleSettings = DEFAULT_SETTINGS,
) -> Iterator[GeneString]:
    """
    Exhaustive strings for every k' <= k, or ``sample`` seeded draws with
    k' drawn uniformly from 0..k.
    """
    if sample is None:
        for size in range(k + 1):
            yield from enumerate_extended_legal_strings(size, settings.exhaustive_cap)
        return
    rng = random.Random(seed)
    for _ in range(sample):
        size = rng.randint(0, k)
        yield random_extended_legal_string(size, rng.randrange(2 ** 32))


# ============================================================================
# SEARCH
# ============================================================================


def _depth_first(
    start: Any,
    successors: Callable[[Any], Iterable[Tuple[Any, Any]]],
    is_goal: Callable[[Any], bool],
    key: Callable[[Any], Hashable],
    cap: int,
) -> Tuple[Optional[List[Any]], int]:
    """Depth-first search with a visited set; returns (rule path or None, states)."""
    visited = set()
    explored = 0

    def visit(state: Any, path: List[Any]) -> Optional[List[Any]]:
        nonlocal explored
        state_key = key(state)
        if state_key in visited:
            return None
        visited.add(state_key)
        explored += 1
        if explored > cap:
            raise SearchInconclusive(explored, cap)
        if is_goal(state):
            return path
        for rule, following in successors(state):
            found = visit(following, path + [rule])
            if found is not None:
                return found
        return None

    return visit(start, []), explored


def _graph_kinds(ruleset: Iterable[Any]) -> Optional[FrozenSet[GraphRuleKind]]:
    try:
        return frozenset(GraphRuleKind(kind) for kind in ruleset)
    except ValueError:
        return None


def _string_kinds(ruleset: Union[str, RuleSystem, Iterable[Any]]) -> FrozenSet[RuleKind]:
    if isinstance(ruleset, (str, RuleSystem)):
        return RuleSystem(ruleset).kinds
    return frozenset(RuleKind(kind) for kind in ruleset)


def _search_graph(g: SimpleMarkedGraph, kinds: FrozenSet[GraphRuleKind], cap: int) -> SearchResult:
    if not g.has_m:
        raise UndefinedSuccessError("graph success is only defined for graphs containing m")

    def successors(state: SimpleMarkedGraph):
        for rule in sorted(applicable_graph_rules(state, kinds), key=lambda r: identity_sort_key(r.vertex)):
            yield rule, apply_graph_rule(state, rule)

    path, explored = _depth_first(
        g, successors, lambda state: explain_graph_success(state)[0],
        SimpleMarkedGraph.canonical_key, cap,
    )
    witness = apply_graph_reduction(g, path) if path is not None else None
    return SearchResult(path is not None, witness, explored)


def _search_string(s: GeneString, kinds: FrozenSet[RuleKind], cap: int) -> SearchResult:
    s.require_valid("brute-force search")

    def successors(state: GeneString):
        for rule in sorted(all_applicable_rules(state, kinds), key=lambda r: r.render()):
            yield rule, apply_rule(state, rule)

    path, explored = _depth_first(s, successors, is_terminal_success, GeneString.render, cap)
    witness = apply_reduction(s, path) if path is not None else None
    return SearchResult(path is not None, witness, explored)


def brute_force_success(
    x: Union[GeneString, SimpleMarkedGraph],
    ruleset: Union[str, RuleSystem, Iterable[Any]],
    state_cap: int = DEFAULT_SETTINGS.state_cap,
) -> SearchResult:
    """
    Complete search for a successful reduction.

    ``ruleset`` is ``"simple"``/``"general"``, string rule kinds, or graph
    rule kinds. A string searched with graph rule kinds is searched through
    its extended overlap graph. Hitting ``state_cap`` raises
    SearchInconclusive rather than answering.
    """
    if not isinstance(ruleset, (str, RuleSystem)):
        ruleset = list(ruleset)
    graph_kinds = None if isinstance(ruleset, (str, RuleSystem)) else _graph_kinds(ruleset)
    if isinstance(x, SimpleMarkedGraph):
        if graph_kinds is None:
            raise PreconditionError("graphs are searched with gnr/sgpr rule sets")
        return _search_graph(x, graph_kinds, state_cap)
    # an empty set stays on the string side
    if graph_kinds:
        return _search_graph(build_extended_overlap_graph(x), graph_kinds, state_cap)
    return _search_string(x, _string_kinds(ruleset), state_cap)


# ============================================================================
# LEMMA CHECKS
# ============================================================================


@dataclass
class LemmaReport:
    """Simulation and structure checks over a batch of strings."""
    instances: int = 0
    checks: int = 0
    commuting_diagrams: int = 0
    violations: List[str] = field(default_factory=list)

    def merge(self, other: "LemmaReport") -> "LemmaReport":
        return LemmaReport(
            self.instances + other.instances,
            self.checks + other.checks,
            self.commuting_diagrams + other.commuting_diagrams,
            self.violations + other.violations,
        )

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary_rows(self) -> List[Tuple[str, Any]]:
        return [
            ("instances", self.instances),
            ("checks", self.checks),
            ("commuting diagrams", self.commuting_diagrams),
            ("violations", len(self.violations)),
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instances": self.instances,
            "checks": self.checks,
            "commuting_diagrams": self.commuting_diagrams,
            "violations": list(self.violations),
            "passed": self.passed,
        }


def verify_simulation(s: GeneString) -> LemmaReport:
    """
    snr_p applies to s iff gnr applies to G_s at the identity of p, and
    sspr_p likewise with sgpr; where they apply both diagram paths give
    the same graph.
    """
    s.require_valid("simulation check")
    graph = build_extended_overlap_graph(s)
    report = LemmaReport(instances=1)
    string_rules = all_applicable_rules(s, MARKER_PRESERVING_KINDS)
    pairs = ((RuleKind.SNR, GraphRuleKind.GNR), (RuleKind.SSPR, GraphRuleKind.SGPR))

    for identity in s.domain:
        if identity == M:
            continue
        for string_kind, graph_kind in pairs:
            report.checks += 1
            graph_rule = GraphRuleInstance(graph_kind, identity)
            matching = [r for r in string_rules if r.kind is string_kind and r.p.identity == identity]
            graph_ok = is_applicable(graph, graph_rule)
            if bool(matching) != graph_ok:
                report.violations.append(
                    f"{s}: {string_kind.value} on {identity} applicable={bool(matching)} "
                    f"but {graph_rule} applicable={graph_ok}"
                )
                continue
            for rule in matching:
                via_string = build_extended_overlap_graph(apply_rule(s, rule))
                via_graph = apply_graph_rule(graph, graph_rule)
                if via_string != via_graph:
                    report.violations.append(
                        f"{s}: G({rule}(s)) = {via_string} differs from {graph_rule}(G) = {via_graph}"
                    )
                else:
                    report.commuting_diagrams += 1
    return report


def verify_structure(s: GeneString) -> LemmaReport:
    """
    [[G_s]] is acyclic and transitively closed, [G_s] is the classical
    overlap graph, and every pair falls in exactly the case its edges show.
    """
    s.require_valid("structure check")
    graph = build_extended_overlap_graph(s)
    report = LemmaReport(instances=1)

    report.checks += 1
    props = directed_properties(graph)
    if not (props.acyclic and props.transitively_closed):
        report.violations.append(f"{s}: nesting graph acyclic={props.acyclic} closed={props.transitively_closed}")

    report.checks += 1
    classical = classical_overlap_graph(s)
    projected = overlap_projection(graph)
    same_edges = {frozenset(e) for e in classical.edges()} == {frozenset(e) for e in projected.edges()}
    same_signs = dict(classical.nodes(data="sign")) == dict(projected.nodes(data="sign"))
    if not (same_edges and same_signs):
        report.violations.append(f"{s}: overlap projection differs from the classical overlap graph")

    identities = list(s.domain)
    for index, p in enumerate(identities):
        for q in identities[index + 1:]:
            report.checks += 1
            relation = pair_relationship(s, p, q)
            undirected = frozenset((p, q)) in graph.undirected
            directed = (p, q) in graph.directed or (q, p) in graph.directed
            expected = {
                PairRelation.OVERLAP: (True, False),
                PairRelation.NESTED: (False, True),
                PairRelation.DISJOINT: (False, False),
            }[relation]
            if (undirected, directed) != expected:
                report.violations.append(f"{s}: pair {p},{q} is {relation.value} but edges disagree")
    return report


def verify_lemmas(strings: Iterable[GeneString]) -> LemmaReport:
    report = LemmaReport()
    for s in strings:
        report = report.merge(verify_simulation(s))
        structure = verify_structure(s)
        report = report.merge(LemmaReport(0, structure.checks, 0, structure.violations))
    return report


# ============================================================================
# CHARACTERIZATION CHECKS
# ============================================================================


@dataclass(frozen=True)
class Disagreement:
    string: str
    ruleset: str
    corrected: bool
    literal: bool
    oracle: bool
    m_outgoing: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "string": self.string,
            "ruleset": self.ruleset,
            "corrected": self.corrected,
            "literal": self.literal,
            "oracle": self.oracle,
            "m_outgoing": self.m_outgoing,
        }


@dataclass
class CharacterizationReport:
    """Closed-form verdicts against brute force, per (string, rule set)."""
    instances: int = 0
    comparisons: int = 0
    corrected_agreements: int = 0
    literal_agreements: int = 0
    certificates_checked: int = 0
    corrected_disagreements: List[Disagreement] = field(default_factory=list)
    literal_disagreements: List[Disagreement] = field(default_factory=list)
    certificate_failures: List[str] = field(default_factory=list)
    inconclusive: int = 0

    def merge(self, other: "CharacterizationReport") -> "CharacterizationReport":
        return CharacterizationReport(
            self.instances + other.instances,
            self.comparisons + other.comparisons,
            self.corrected_agreements + other.corrected_agreements,
            self.literal_agreements + other.literal_agreements,
            self.certificates_checked + other.certificates_checked,
            self.corrected_disagreements + other.corrected_disagreements,
            self.literal_disagreements + other.literal_disagreements,
            self.certificate_failures + other.certificate_failures,
            self.inconclusive + other.inconclusive,
        )

    @property
    def passed(self) -> bool:
        return not self.corrected_disagreements and not self.certificate_failures and not self.inconclusive

    @property
    def literal_gap_explained(self) -> bool:
        """Every literal disagreement has S containing Gnr and an edge out of m."""
        return all(
            item.m_outgoing and "Gnr" in item.ruleset for item in self.literal_disagreements
        )

    def summary_rows(self) -> List[Tuple[str, Any]]:
        return [
            ("instances", self.instances),
            ("comparisons", self.comparisons),
            ("corrected agreements", self.corrected_agreements),
            ("literal agreements", self.literal_agreements),
            ("certificates replayed", self.certificates_checked),
            ("corrected disagreements", len(self.corrected_disagreements)),
            ("literal disagreements", len(self.literal_disagreements)),
            ("certificate failures", len(self.certificate_failures)),
            ("inconclusive searches", self.inconclusive),
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instances": self.instances,
            "comparisons": self.comparisons,
            "corrected_agreements": self.corrected_agreements,
            "literal_agreements": self.literal_agreements,
            "certificates_checked": self.certificates_checked,
            "corrected_disagreements": [d.to_dict() for d in self.corrected_disagreements],
            "literal_disagreements": [d.to_dict() for d in self.literal_disagreements],
            "certificate_failures": list(self.certificate_failures),
            "inconclusive": self.inconclusive,
            "literal_gap_explained": self.literal_gap_explained,
            "passed": self.passed,
        }


def characterize_instance(
    s: GeneString,
    settings: OracleSettings = DEFAULT_SETTINGS,
    enumerate_orderings: bool = True,
) -> CharacterizationReport:
    """Compare corrected, literal and brute-force verdicts on G_s for every S."""
    graph = build_extended_overlap_graph(s)
    report = CharacterizationReport(instances=1)
    m_outgoing = bool(graph.out_neighbors(M))

    for kinds in GRAPH_RULESETS:
        name = format_ruleset(kinds)
        verdict = check_success(graph, kinds)
        literal = literal_theorem_check(graph, kinds)
        try:
            oracle = brute_force_success(graph, kinds, settings.state_cap).successful
        except SearchInconclusive:
            report.inconclusive += 1
            continue
        report.comparisons += 1
        item = Disagreement(s.render(), name, verdict.successful, literal, oracle, m_outgoing)
        if verdict.successful == oracle:
            report.corrected_agreements += 1
        else:
            report.corrected_disagreements.append(item)
        if literal == oracle:
            report.literal_agreements += 1
        else:
            report.literal_disagreements.append(item)

        certificates = [verdict.certificate] if verdict.certificate else []
        if enumerate_orderings and len(graph.signs) <= settings.enumeration_cap:
            orderings = enumerate_successful_orderings(graph, kinds, settings.enumeration_cap)
            if bool(orderings) != verdict.successful:
                report.certificate_failures.append(
                    f"{s} {name}: {len(orderings)} orderings but verdict {verdict.successful}"
                )
            certificates.extend(orderings)
        for certificate in certificates:
            report.certificates_checked += 1
            if not validate_ordering(graph, certificate, kinds):
                report.certificate_failures.append(f"{s} {name}: certificate {certificate} does not replay")
    return report


def characterization_report(
    strings: Iterable[GeneString],
    settings: OracleSettings = DEFAULT_SETTINGS,
    enumerate_orderings: bool = True,
) -> CharacterizationReport:
    report = CharacterizationReport()
    for s in strings:
        report = report.merge(characterize_instance(s, settings, enumerate_orderings))
    return report


def cross_validate_characterizations(
    k: int,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SAMPLE_SEED,
    settings: OracleSettings = DEFAULT_SETTINGS,
) -> CharacterizationReport:
    """Exhaustive (or sampled) comparison over all strings with at most k pointer identities."""
    report = characterization_report(instance_stream(k, sample, seed, settings), settings)
    logger.info(
        "characterizations up to k=%d: %d comparisons, %d corrected / %d literal disagreements",
        k, report.comparisons, len(report.corrected_disagreements), len(report.literal_disagreements),
    )
    return report


# ============================================================================
# STRING / GRAPH EQUIVALENCE
# ============================================================================


@dataclass
class EquivalenceReport:
    """Brute force over {snr, sspr} on s against {Gnr, sGpr} on G_s."""
    instances: int = 0
    agreements: int = 0
    successful: int = 0
    disagreements: List[str] = field(default_factory=list)
    inconclusive: int = 0

    def merge(self, other: "EquivalenceReport") -> "EquivalenceReport":
        return EquivalenceReport(
            self.instances + other.instances,
            self.agreements + other.agreements,
            self.successful + other.successful,
            self.disagreements + other.disagreements,
            self.inconclusive + other.inconclusive,
        )

    @property
    def passed(self) -> bool:
        return not self.disagreements and not self.inconclusive

    def summary_rows(self) -> List[Tuple[str, Any]]:
        return [
            ("instances", self.instances),
            ("agreements", self.agreements),
            ("successful instances", self.successful),
            ("disagreements", len(self.disagreements)),
            ("inconclusive searches", self.inconclusive),
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "instances": self.instances,
            "agreements": self.agreements,
            "successful": self.successful,
            "disagreements": list(self.disagreements),
            "inconclusive": self.inconclusive,
            "passed": self.passed,
        }


def string_graph_equivalence(
    strings: Iterable[GeneString], settings: OracleSettings = DEFAULT_SETTINGS
) -> EquivalenceReport:
    report = EquivalenceReport()
    graph_kinds = GRAPH_RULESETS[-1]
    for s in strings:
        report.instances += 1
        try:
            on_string = brute_force_success(s, MARKER_PRESERVING_KINDS, settings.state_cap).successful
            on_graph = brute_force_success(
                build_extended_overlap_graph(s), graph_kinds, settings.state_cap
            ).successful
        except SearchInconclusive:
            report.inconclusive += 1
            continue
        if on_string == on_graph:
            report.agreements += 1
            report.successful += int(on_string)
        else:
            report.disagreements.append(f"{s}: strings {on_string}, graph {on_graph}")
    return report


def cross_validate_string_graph(
    k: int,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SAMPLE_SEED,
    settings: OracleSettings = DEFAULT_SETTINGS,
) -> EquivalenceReport:
    return string_graph_equivalence(instance_stream(k, sample, seed, settings), settings)
