"""
Deciding success of a simple marked graph in a rule set S of {Gnr, sGpr}.

Closed-form conditions, for a graph g containing m:

    {Gnr}        no undirected edges, every vertex negative, g acyclic
    {sGpr}       [g] is a tree; deg(v) even iff v negative; orienting every
                 tree edge child -> parent (root m) together with the
                 directed edges gives an acyclic graph
    {Gnr, sGpr}  as {sGpr} with [g] a forest whose trees get roots (m is
                 the root of its tree) such that the oriented graph is acyclic

For S containing Gnr the published conditions miss one obstruction: a
directed edge out of m blocks its target forever, since m is never
removed. ``check_success`` adds that test; ``literal_theorem_check``
evaluates the conditions as published. "2 b e 2" is the smallest
string whose graph separates the two for {Gnr}.

A successful reduction corresponds to an ordering of the vertices ending
in m; roots of the forest (except m) are removed by gnr, all other
vertices by sgpr.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from gene_assembly.config import ENUMERATION_CAP
from gene_assembly.errors import (
    CertificateError,
    EnumerationCapError,
    PreconditionError,
    ReductionAborted,
    UndefinedSuccessError,
)
from gene_assembly.graph_rules import (
    ALL_GRAPH_RULE_KINDS,
    GraphRuleInstance,
    GraphRuleKind,
    apply_graph_reduction,
    apply_graph_rule,
    applicable_graph_rules,
    explain_graph_success,
    format_ruleset,
)
from gene_assembly.marked_graph import (
    SimpleMarkedGraph,
    directed_projection,
    overlap_projection,
)
from gene_assembly.string_rules import (
    ReductionTrace,
    RuleKind,
    RuleSystem,
    applicable_rules,
    apply_reduction,
)
from gene_assembly.strings import M, GeneString, Identity, Sign, identity_sort_key


logger = logging.getLogger(__name__)


class FailedCondition(str, Enum):
    NOT_A_TREE = "not-a-tree"
    NOT_A_FOREST = "not-a-forest"
    PARITY = "parity"
    CYCLE = "cycle"
    M_OUTGOING = "m-outgoing"
    POSITIVE_VERTEX = "positive-vertex"
    UNDIRECTED_EDGE_PRESENT = "undirected-edge-present"
    NO_RULES = "no-rules"


# ============================================================================
# DATA STRUCTURES
# ============================================================================


@dataclass(frozen=True)
class OrderingCertificate:
    """Vertex ordering ending in m, with the rule used for every other vertex."""
    ordering: Tuple[Identity, ...]
    roles: Tuple[Tuple[Identity, GraphRuleKind], ...]

    @classmethod
    def from_rules(cls, rules: Iterable[GraphRuleInstance]) -> "OrderingCertificate":
        rules = list(rules)
        return cls(
            tuple(rule.vertex for rule in rules) + (M,),
            tuple((rule.vertex, rule.kind) for rule in rules),
        )

    @property
    def role_map(self) -> Dict[Identity, GraphRuleKind]:
        return dict(self.roles)

    def rules(self) -> List[GraphRuleInstance]:
        roles = self.role_map
        try:
            return [GraphRuleInstance(roles[v], v) for v in self.ordering if v != M]
        except KeyError as exc:
            raise CertificateError(f"no role given for vertex {exc.args[0]}") from None

    def forest_roots(self) -> Tuple[Identity, ...]:
        """Roots of the undirected forest: the gnr vertices, then m."""
        return tuple(v for v, kind in self.roles if kind is GraphRuleKind.GNR) + (M,)

    def render(self) -> str:
        roles = self.role_map
        parts = [f"{v}:{roles[v].value}" if v in roles else str(v) for v in self.ordering]
        return "(" + ", ".join(parts) + ")"

    def __str__(self) -> str:
        return self.render()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ordering": list(self.ordering),
            "roles": {str(v): kind.value for v, kind in self.roles},
        }


@dataclass(frozen=True)
class SuccessVerdict:
    successful: bool
    ruleset: FrozenSet[GraphRuleKind]
    certificate: Optional[OrderingCertificate] = None
    failed_condition: Optional[FailedCondition] = None

    def __post_init__(self):
        if self.successful != (self.certificate is not None):
            raise ValueError("a verdict is successful exactly when it carries a certificate")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "successful": self.successful,
            "ruleset": format_ruleset(self.ruleset),
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "failed_condition": self.failed_condition.value if self.failed_condition else None,
        }


# ============================================================================
# CONDITIONS
# ============================================================================


def _require_m(g: SimpleMarkedGraph) -> None:
    if not g.has_m:
        raise UndefinedSuccessError("success is only defined for graphs containing m")


def _kinds(S: Iterable[Any]) -> FrozenSet[GraphRuleKind]:
    return frozenset(GraphRuleKind(kind) for kind in S)


def _parity_holds(g: SimpleMarkedGraph) -> bool:
    """Undirected degree is even iff the vertex is negative."""
    return all(
        (g.undirected_degree(v) % 2 == 0) == (g.signs[v] is Sign.NEGATIVE)
        for v in g.vertices
    )


def _m_has_outgoing(g: SimpleMarkedGraph) -> bool:
    return bool(g.out_neighbors(M))


def _tree_orientation_acyclic(g: SimpleMarkedGraph) -> bool:
    """Directed edges plus child -> parent tree edges (root m) form a DAG."""
    augmented = directed_projection(g)
    for child, parent in nx.bfs_predecessors(overlap_projection(g), M):
        augmented.add_edge(child, parent)
    return nx.is_directed_acyclic_graph(augmented)


def _roots_exist(g: SimpleMarkedGraph) -> bool:
    """
    Whether roots can be chosen in the forest [g], m rooting its own tree,
    so that the oriented graph is acyclic.

    Peels vertices that can come first in a topological order: a non-m
    vertex with one remaining undirected edge (a child), or a vertex with
    none left (a root). Any such choice can be completed when one exists.
    """
    remaining = set(g.signs)
    undirected = {v: set(g.undirected_neighbors(v)) for v in remaining}
    incoming = {v: set(g.in_neighbors(v)) for v in remaining}
    progress = True
    while remaining and progress:
        progress = False
        for v in sorted(remaining, key=identity_sort_key):
            if incoming[v] & remaining:
                continue
            degree = len(undirected[v] & remaining)
            if degree == 0 or (degree == 1 and v != M):
                remaining.discard(v)
                progress = True
                break
    return not remaining


def _greedy_certificate(
    g: SimpleMarkedGraph, kinds: FrozenSet[GraphRuleKind]
) -> Optional[OrderingCertificate]:
    """Apply the applicable rule with the smallest vertex until stuck."""
    current = g
    applied: List[GraphRuleInstance] = []
    while True:
        candidates = applicable_graph_rules(current, kinds)
        if not candidates:
            break
        rule = min(candidates, key=lambda r: identity_sort_key(r.vertex))
        current = apply_graph_rule(current, rule)
        applied.append(rule)
    if explain_graph_success(current)[0]:
        return OrderingCertificate.from_rules(applied)
    return None


def _failed_condition(
    g: SimpleMarkedGraph, kinds: FrozenSet[GraphRuleKind], corrected: bool
) -> Optional[FailedCondition]:
    """First violated closed-form condition for ``kinds``, or None."""
    if not kinds:
        return None if explain_graph_success(g)[0] else FailedCondition.NO_RULES

    if kinds == {GraphRuleKind.GNR}:
        if g.undirected:
            return FailedCondition.UNDIRECTED_EDGE_PRESENT
        if any(sign is Sign.POSITIVE for sign in g.signs.values()):
            return FailedCondition.POSITIVE_VERTEX
        if corrected and _m_has_outgoing(g):
            return FailedCondition.M_OUTGOING
        if not nx.is_directed_acyclic_graph(directed_projection(g)):
            return FailedCondition.CYCLE
        return None

    overlap = overlap_projection(g)
    if kinds == {GraphRuleKind.SGPR}:
        if not nx.is_tree(overlap):
            return FailedCondition.NOT_A_TREE
        if not _parity_holds(g):
            return FailedCondition.PARITY
        if not _tree_orientation_acyclic(g):
            return FailedCondition.CYCLE
        return None

    if not nx.is_forest(overlap):
        return FailedCondition.NOT_A_FOREST
    if not _parity_holds(g):
        return FailedCondition.PARITY
    if corrected and _m_has_outgoing(g):
        return FailedCondition.M_OUTGOING
    if not _roots_exist(g):
        return FailedCondition.CYCLE
    return None


# ============================================================================
# OPERATIONS
# ============================================================================


def check_success(g: SimpleMarkedGraph, S: Iterable[Any] = ALL_GRAPH_RULE_KINDS) -> SuccessVerdict:
    """
    Decide whether ``g`` is successful in ``S`` and build a certificate.

    The closed-form conditions (with the m-outgoing correction) decide the
    verdict; the certificate comes from replaying applicable rules, smallest
    vertex first.
    """
    _require_m(g)
    kinds = _kinds(S)
    failed = _failed_condition(g, kinds, corrected=True)
    if failed is not None:
        return SuccessVerdict(False, kinds, failed_condition=failed)

    certificate = _greedy_certificate(g, kinds)
    if certificate is None:
        logger.warning("conditions hold for %s in %s but replay got stuck", g, format_ruleset(kinds))
        return SuccessVerdict(False, kinds, failed_condition=FailedCondition.CYCLE)
    return SuccessVerdict(True, kinds, certificate=certificate)


def literal_theorem_check(g: SimpleMarkedGraph, S: Iterable[Any] = ALL_GRAPH_RULE_KINDS) -> bool:
    """The published closed-form conditions, without the m-outgoing test."""
    _require_m(g)
    return _failed_condition(g, _kinds(S), corrected=False) is None


def validate_ordering(
    g: SimpleMarkedGraph,
    cert: OrderingCertificate,
    S: Optional[Iterable[Any]] = None,
) -> bool:
    """
    Replay ``cert`` through the graph rules; True iff every step applies and
    the result is the single negative m. With ``S`` given, roles outside S
    make the certificate invalid.
    """
    ordering = tuple(cert.ordering)
    if sorted(ordering, key=identity_sort_key) != list(g.vertices):
        raise CertificateError(f"ordering {ordering} is not a permutation of {g.vertices}")
    if not ordering or ordering[-1] != M:
        raise CertificateError("ordering must end with m")
    roles = cert.role_map
    if M in roles:
        raise CertificateError("m has no role")
    if set(roles) != set(ordering[:-1]):
        raise CertificateError("roles must cover exactly the vertices other than m")
    if S is not None and not set(roles.values()) <= _kinds(S):
        return False

    try:
        trace = apply_graph_reduction(g, cert.rules())
    except ReductionAborted as exc:
        logger.debug("certificate %s fails at step %d: %s", cert, exc.step, exc.cause)
        return False
    return trace.success


def enumerate_successful_orderings(
    g: SimpleMarkedGraph,
    S: Iterable[Any] = ALL_GRAPH_RULE_KINDS,
    cap: int = ENUMERATION_CAP,
) -> FrozenSet[OrderingCertificate]:
    """All orderings (with roles) of ``g`` that give a successful reduction in ``S``."""
    _require_m(g)
    if len(g.signs) > cap:
        raise EnumerationCapError(len(g.signs), cap, "vertex count")
    kinds = _kinds(S)
    dead: Set[str] = set()
    found: Set[OrderingCertificate] = set()

    def explore(current: SimpleMarkedGraph, prefix: Tuple[GraphRuleInstance, ...]) -> bool:
        key = current.canonical_key()
        if key in dead:
            return False
        if explain_graph_success(current)[0]:
            found.add(OrderingCertificate.from_rules(prefix))
            return True
        reached = False
        for rule in sorted(applicable_graph_rules(current, kinds), key=lambda r: identity_sort_key(r.vertex)):
            if explore(apply_graph_rule(current, rule), prefix + (rule,)):
                reached = True
        if not reached:
            dead.add(key)
        return reached

    explore(g, ())
    return frozenset(found)


def corollary_shape_check(g: SimpleMarkedGraph) -> bool:
    """
    Whether the directed part is the transitive closure of a forest whose
    edges point from children to parents.
    """
    if g.undirected:
        raise PreconditionError("corollary shape check needs a graph without undirected edges")
    nesting = directed_projection(g)
    if not nx.is_directed_acyclic_graph(nesting):
        return False
    reduction = nx.transitive_reduction(nesting)
    if any(degree > 1 for _, degree in reduction.out_degree()):
        return False
    closure = nx.transitive_closure_dag(reduction)
    return set(closure.edges()) == set(nesting.edges())


def lift_certificate(s: GeneString, cert: OrderingCertificate) -> ReductionTrace:
    """
    Turn a certificate for G_s into a reduction of ``s``: a gnr vertex
    becomes the snr and an sgpr vertex the sspr of that identity.
    """
    s.require_valid("lifting a certificate")
    wanted = {GraphRuleKind.GNR: RuleKind.SNR, GraphRuleKind.SGPR: RuleKind.SSPR}
    current = s
    rules = []
    for graph_rule in cert.rules():
        kind = wanted[graph_rule.kind]
        matches = [
            rule for rule in applicable_rules(current, RuleSystem.SIMPLE)
            if rule.kind is kind and rule.p.identity == graph_rule.vertex
        ]
        if not matches:
            raise CertificateError(f"no {kind.value} for {graph_rule.vertex} applies to {current}")
        rules.append(matches[0])
        current = apply_reduction(current, [matches[0]]).final
    return apply_reduction(s, rules)
