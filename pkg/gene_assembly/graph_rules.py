"""
Graph negative rule (gnr) and simple graph positive rule (sgpr).

For a vertex p other than m:

    gnr_p   p negative, no undirected edge at p, no directed edge into p;
            removes p and its edges.
    sgpr_p  p positive, exactly one undirected edge p - q, no directed edge
            into p; removes p and its edges and flips the sign of q.

Outgoing directed edges never block a rule. Both rules work on any simple
marked graph, not only on extended overlap graphs.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from gene_assembly.errors import GeneAssemblyError, GraphRuleError, ReductionAborted, RuleSyntaxError
from gene_assembly.marked_graph import SimpleMarkedGraph
from gene_assembly.string_rules import split_rule_list
from gene_assembly.strings import M, Identity, Sign, identity_sort_key, parse_identity


logger = logging.getLogger(__name__)


class GraphRuleKind(str, Enum):
    GNR = "gnr"
    SGPR = "sgpr"

    @property
    def family(self) -> str:
        """Name of the rule family, as in {Gnr, sGpr}."""
        return "Gnr" if self is GraphRuleKind.GNR else "sGpr"


ALL_GRAPH_RULE_KINDS = frozenset(GraphRuleKind)

# violated-condition names reported by GraphRuleError
COND_MISSING_VERTEX = "missing-vertex"
COND_SIGN = "sign"
COND_UNDIRECTED_DEGREE = "undirected-degree"
COND_INCOMING_EDGE = "incoming-directed-edge"


def parse_ruleset(text: str) -> FrozenSet[GraphRuleKind]:
    """Read ``"gnr,sgpr"``, ``"Gnr"``, ``"sGpr"`` or ``"none"``."""
    kinds = set()
    for token in text.replace("{", " ").replace("}", " ").replace(",", " ").split():
        name = token.lower()
        if name in ("none", "empty"):
            continue
        try:
            kinds.add(GraphRuleKind(name))
        except ValueError:
            raise RuleSyntaxError(f"unknown graph rule family {token!r}") from None
    return frozenset(kinds)


def format_ruleset(kinds: Iterable[GraphRuleKind]) -> str:
    names = [kind.family for kind in sorted(kinds, key=lambda k: k.value)]
    return "{" + ", ".join(names) + "}"


# ============================================================================
# DATA STRUCTURES
# ============================================================================


@dataclass(frozen=True)
class GraphRuleInstance:
    kind: GraphRuleKind
    vertex: Identity

    def __post_init__(self):
        object.__setattr__(self, "kind", GraphRuleKind(self.kind))
        if self.vertex == M:
            raise RuleSyntaxError(f"{self.kind.value}: rules never apply to m")

    def render(self) -> str:
        return f"{self.kind.value}:{self.vertex}"

    def __str__(self) -> str:
        return self.render()

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "vertex": self.vertex}


@dataclass(frozen=True)
class GraphReductionStep:
    rule: GraphRuleInstance
    result: SimpleMarkedGraph


@dataclass(frozen=True)
class GraphReductionTrace:
    initial: SimpleMarkedGraph
    steps: Tuple[GraphReductionStep, ...] = ()
    success: bool = False

    @property
    def final(self) -> SimpleMarkedGraph:
        return self.steps[-1].result if self.steps else self.initial

    @property
    def rules(self) -> Tuple[GraphRuleInstance, ...]:
        return tuple(step.rule for step in self.steps)

    def composition_notation(self) -> str:
        return " ".join(rule.render() for rule in reversed(self.rules)) or "id"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "initial": self.initial.to_dict(),
            "steps": [
                {"rule": step.rule.render(), "result": step.result.summary()}
                for step in self.steps
            ],
            "final": self.final.to_dict(),
            "success": self.success,
        }


def parse_graph_rule(text: str) -> GraphRuleInstance:
    """Read ``gnr:4`` or ``sgpr:6``."""
    name, sep, vertex = text.strip().partition(":")
    if not sep:
        raise RuleSyntaxError(f"rule {text!r} lacks ':' between name and vertex")
    try:
        kind = GraphRuleKind(name.strip().lower())
    except ValueError:
        raise RuleSyntaxError(f"unknown graph rule {name!r}") from None
    try:
        identity = parse_identity(vertex)
    except ValueError as exc:
        raise RuleSyntaxError(str(exc)) from None
    return GraphRuleInstance(kind, identity)


def parse_graph_rule_list(text: str) -> List[GraphRuleInstance]:
    return [parse_graph_rule(piece) for piece in split_rule_list(text)]


# ============================================================================
# APPLICABILITY
# ============================================================================


def violated_condition(g: SimpleMarkedGraph, r: GraphRuleInstance) -> Optional[Tuple[str, str]]:
    """None when ``r`` applies to ``g``, else (condition, detail)."""
    p = r.vertex
    if p not in g.signs:
        return COND_MISSING_VERTEX, f"{p} is not a vertex"
    incoming = g.in_neighbors(p)
    degree = g.undirected_degree(p)
    if r.kind is GraphRuleKind.GNR:
        if g.signs[p] is not Sign.NEGATIVE:
            return COND_SIGN, f"{p} is positive"
        if degree:
            return COND_UNDIRECTED_DEGREE, f"{p} has {degree} undirected edges"
    else:
        if g.signs[p] is not Sign.POSITIVE:
            return COND_SIGN, f"{p} is negative"
        if degree != 1:
            return COND_UNDIRECTED_DEGREE, f"undirected degree {degree} != 1"
    if incoming:
        sources = ", ".join(str(v) for v in sorted(incoming, key=identity_sort_key))
        return COND_INCOMING_EDGE, f"edges into {p} from {sources}"
    return None


def is_applicable(g: SimpleMarkedGraph, r: GraphRuleInstance) -> bool:
    return violated_condition(g, r) is None


def applicable_graph_rules(
    g: SimpleMarkedGraph, kinds: Iterable[GraphRuleKind] = ALL_GRAPH_RULE_KINDS
) -> FrozenSet[GraphRuleInstance]:
    """Every gnr/sgpr instance (restricted to ``kinds``) applicable to ``g``."""
    wanted = frozenset(GraphRuleKind(kind) for kind in kinds)
    found = set()
    for v in g.vertices:
        if v == M:
            continue
        # sign decides which rule can apply
        kind = GraphRuleKind.SGPR if g.signs[v] is Sign.POSITIVE else GraphRuleKind.GNR
        if kind in wanted:
            rule = GraphRuleInstance(kind, v)
            if is_applicable(g, rule):
                found.add(rule)
    return frozenset(found)


def apply_graph_rule(g: SimpleMarkedGraph, r: GraphRuleInstance) -> SimpleMarkedGraph:
    violation = violated_condition(g, r)
    if violation is not None:
        raise GraphRuleError(r, *violation)
    result = g.without_vertex(r.vertex)
    if r.kind is GraphRuleKind.SGPR:
        (neighbor,) = g.undirected_neighbors(r.vertex)
        result = result.with_sign(neighbor, result.signs[neighbor].flipped())
    return result


def explain_graph_success(g: SimpleMarkedGraph) -> Tuple[bool, str]:
    """Success test with a one-line diagnostic."""
    if not g.has_m:
        return False, "no m present"
    if len(g.signs) != 1:
        return False, f"{len(g.signs) - 1} vertices besides m remain"
    if g.signs[M] is not Sign.NEGATIVE:
        return False, "m is positive"
    return True, "single negative m"


def is_graph_success(g: SimpleMarkedGraph) -> bool:
    """True iff ``g`` is the graph with the single negative vertex m."""
    success, reason = explain_graph_success(g)
    if not success:
        logger.debug("graph %s is not terminal: %s", g, reason)
    return success


def apply_graph_reduction(
    g: SimpleMarkedGraph, rules: Sequence[GraphRuleInstance]
) -> GraphReductionTrace:
    """Apply ``rules`` in execution order; ReductionAborted carries the partial trace."""
    steps: List[GraphReductionStep] = []
    current = g
    for index, rule in enumerate(rules, start=1):
        try:
            current = apply_graph_rule(current, rule)
        except GeneAssemblyError as exc:
            partial = GraphReductionTrace(g, tuple(steps), False)
            raise ReductionAborted(index, rule, partial, exc) from exc
        steps.append(GraphReductionStep(rule, current))
    return GraphReductionTrace(g, tuple(steps), is_graph_success(current))
