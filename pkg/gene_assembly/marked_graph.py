"""
Extended overlap graphs and the simple marked graph model.

For identities p and q of an (extended) legal string exactly one case holds:

    disjoint  neither occurs inside the other's interval   -> no edge
    overlap   each occurs once inside the other's interval -> undirected p - q
    nested    both q-occurrences lie inside the p-interval -> directed q -> p

A directed edge (x, y) therefore means x's occurrences lie inside y's
interval. Vertex signs: + iff exactly one of the two occurrences is barred.
Only occurrences strictly between the two endpoints count.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

import networkx as nx

from gene_assembly.errors import GraphStructureError, RelabelError, UnknownIdentityError
from gene_assembly.strings import (
    M,
    GeneString,
    Identity,
    Sign,
    format_identity,
    identity_sort_key,
    pointer_profile,
)


class PairRelation(str, Enum):
    DISJOINT = "disjoint"
    OVERLAP = "overlap"
    NESTED = "nested"


def _edge_key(edge: Tuple[Identity, Identity]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    return identity_sort_key(edge[0]), identity_sort_key(edge[1])


def _ordered_pair(pair: Iterable[Identity]) -> Tuple[Identity, Identity]:
    x, y = sorted(pair, key=identity_sort_key)
    return x, y


# ============================================================================
# DATA STRUCTURES
# ============================================================================


@dataclass(frozen=True)
class DirectedProperties:
    acyclic: bool
    transitively_closed: bool


@dataclass(frozen=True)
class SimpleMarkedGraph:
    """
    Signed graph with one undirected and one directed edge set.

    Vertices are identities (pointer values and optionally m). Equality is
    labeled equality: same names, signs and edge sets.
    """
    signs: Mapping[Identity, Sign]
    undirected: FrozenSet[FrozenSet[Identity]] = field(default_factory=frozenset)
    directed: FrozenSet[Tuple[Identity, Identity]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "signs", {v: Sign(s) for v, s in dict(self.signs).items()})
        object.__setattr__(self, "undirected", frozenset(frozenset(e) for e in self.undirected))
        object.__setattr__(self, "directed", frozenset(tuple(e) for e in self.directed))
        self._validate()

    def _validate(self) -> None:
        for edge in self.undirected:
            if len(edge) != 2:
                raise GraphStructureError(f"undirected edge {sorted(edge, key=identity_sort_key)} is a self-loop")
            for v in edge:
                if v not in self.signs:
                    raise GraphStructureError(f"edge endpoint {v} is not a vertex")
        for x, y in self.directed:
            if x == y:
                raise GraphStructureError(f"directed self-loop at {x}")
            for v in (x, y):
                if v not in self.signs:
                    raise GraphStructureError(f"edge endpoint {v} is not a vertex")
            if (y, x) in self.directed:
                raise GraphStructureError(
                    f"opposite directed edges {x}->{y} and {y}->{x}; use one undirected edge"
                )
            if frozenset((x, y)) in self.undirected:
                raise GraphStructureError(f"{x} and {y} are joined by both edge kinds")

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    @classmethod
    def build(
        cls,
        signs: Mapping[Identity, Any],
        undirected: Iterable[Iterable[Identity]] = (),
        directed: Iterable[Tuple[Identity, Identity]] = (),
    ) -> "SimpleMarkedGraph":
        return cls(
            {v: Sign(s) for v, s in signs.items()},
            frozenset(frozenset(e) for e in undirected),
            frozenset(tuple(e) for e in directed),
        )

    # -- queries ------------------------------------------------------------

    @property
    def vertices(self) -> Tuple[Identity, ...]:
        return tuple(sorted(self.signs, key=identity_sort_key))

    @property
    def has_m(self) -> bool:
        return M in self.signs

    def sign(self, v: Identity) -> Sign:
        try:
            return self.signs[v]
        except KeyError:
            raise UnknownIdentityError(f"vertex {v} not in graph") from None

    def undirected_neighbors(self, v: Identity) -> Set[Identity]:
        return {w for edge in self.undirected if v in edge for w in edge if w != v}

    def undirected_degree(self, v: Identity) -> int:
        return sum(1 for edge in self.undirected if v in edge)

    def in_neighbors(self, v: Identity) -> Set[Identity]:
        return {x for x, y in self.directed if y == v}

    def out_neighbors(self, v: Identity) -> Set[Identity]:
        return {y for x, y in self.directed if x == v}

    def sorted_undirected(self) -> List[Tuple[Identity, Identity]]:
        return sorted((_ordered_pair(e) for e in self.undirected), key=_edge_key)

    def sorted_directed(self) -> List[Tuple[Identity, Identity]]:
        return sorted(self.directed, key=_edge_key)

    # -- derived graphs -----------------------------------------------------

    def without_vertex(self, v: Identity) -> "SimpleMarkedGraph":
        """Remove ``v`` with every edge touching it."""
        signs = {w: s for w, s in self.signs.items() if w != v}
        return SimpleMarkedGraph(
            signs,
            frozenset(e for e in self.undirected if v not in e),
            frozenset(e for e in self.directed if v not in e),
        )

    def with_sign(self, v: Identity, sign: Sign) -> "SimpleMarkedGraph":
        signs = dict(self.signs)
        signs[v] = sign
        return SimpleMarkedGraph(signs, self.undirected, self.directed)

    def restricted(self, undirected: bool = True, directed: bool = True) -> "SimpleMarkedGraph":
        """Same vertices and signs, keeping only the chosen edge kinds."""
        return SimpleMarkedGraph(
            self.signs,
            self.undirected if undirected else frozenset(),
            self.directed if directed else frozenset(),
        )

    # -- serialization ------------------------------------------------------

    def canonical_key(self) -> str:
        """Sorted vertex/edge text; equal graphs have equal keys."""
        vertices = " ".join(f"{format_identity(v)}{self.signs[v].value}" for v in self.vertices)
        undirected = " ".join(f"{x}-{y}" for x, y in self.sorted_undirected())
        directed = " ".join(f"{x}>{y}" for x, y in self.sorted_directed())
        return f"{vertices} | {undirected} | {directed}"

    def summary(self) -> str:
        return self.canonical_key()

    def __str__(self) -> str:
        return self.canonical_key()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vertices": [{"id": v, "sign": self.signs[v].value} for v in self.vertices],
            "undirected": [[x, y] for x, y in self.sorted_undirected()],
            "directed": [[x, y] for x, y in self.sorted_directed()],
        }


# ============================================================================
# CONSTRUCTION
# ============================================================================


def _inner_counts(s: GeneString) -> Dict[Identity, Dict[Identity, int]]:
    """For each identity p, how often each other identity occurs inside the p-interval."""
    counts: Dict[Identity, Dict[Identity, int]] = {}
    for p, (i, j) in s.positions.items():
        inner: Dict[Identity, int] = {}
        for symbol in s.symbols[i + 1:j]:
            inner[symbol.identity] = inner.get(symbol.identity, 0) + 1
        counts[p] = inner
    return counts


def pair_relationship(s: GeneString, p: Identity, q: Identity) -> PairRelation:
    """Which of the three cases holds for identities ``p`` and ``q`` of ``s``."""
    s.require_valid("pair relationship")
    for identity in (p, q):
        if identity not in s.positions:
            raise UnknownIdentityError(f"identity {identity} not in dom({s})")
    counts = _inner_counts(s)
    q_in_p = counts[p].get(q, 0)
    p_in_q = counts[q].get(p, 0)
    if q_in_p == 1 and p_in_q == 1:
        return PairRelation.OVERLAP
    if q_in_p == 2 or p_in_q == 2:
        return PairRelation.NESTED
    return PairRelation.DISJOINT


def build_extended_overlap_graph(s: GeneString) -> SimpleMarkedGraph:
    """The extended overlap graph G_s of a legal or extended legal string."""
    s.require_valid("extended overlap graph")
    counts = _inner_counts(s)
    signs = {}
    for identity, (i, j) in s.positions.items():
        differs = s.symbols[i].barred != s.symbols[j].barred
        signs[identity] = Sign.POSITIVE if differs else Sign.NEGATIVE

    undirected = set()
    directed = set()
    identities = sorted(s.positions, key=identity_sort_key)
    for index, p in enumerate(identities):
        for q in identities[index + 1:]:
            q_in_p = counts[p].get(q, 0)
            p_in_q = counts[q].get(p, 0)
            if q_in_p == 1 and p_in_q == 1:
                undirected.add(frozenset((p, q)))
            elif q_in_p == 2:
                directed.add((q, p))
            elif p_in_q == 2:
                directed.add((p, q))
    return SimpleMarkedGraph(signs, frozenset(undirected), frozenset(directed))


def classical_overlap_graph(s: GeneString) -> nx.Graph:
    """
    Overlap graph straight from the interval definition: p and q are
    adjacent iff each lies in the domain of the other's interval.
    """
    s.require_valid("overlap graph")
    profiles = {identity: pointer_profile(s, identity) for identity in s.domain}
    graph = nx.Graph()
    for identity, profile in profiles.items():
        graph.add_node(identity, sign=profile.sign)
    identities = list(profiles)
    for index, p in enumerate(identities):
        p_domain = set(profiles[p].interval.domain)
        for q in identities[index + 1:]:
            if q in p_domain and p in profiles[q].interval.domain:
                graph.add_edge(p, q)
    return graph


# ============================================================================
# PROJECTIONS AND PROPERTIES
# ============================================================================


def overlap_projection(g: SimpleMarkedGraph) -> nx.Graph:
    """[g]: the signed undirected graph left after dropping directed edges."""
    graph = nx.Graph()
    for v in g.vertices:
        graph.add_node(v, sign=g.signs[v])
    graph.add_edges_from(g.sorted_undirected())
    return graph


def directed_projection(g: SimpleMarkedGraph) -> nx.DiGraph:
    """[[g]]: the signed directed graph left after dropping undirected edges."""
    graph = nx.DiGraph()
    for v in g.vertices:
        graph.add_node(v, sign=g.signs[v])
    graph.add_edges_from(g.sorted_directed())
    return graph


def is_transitively_closed(graph: nx.DiGraph) -> bool:
    closure = nx.transitive_closure(graph, reflexive=None)
    return set(closure.edges()) == set(graph.edges())


def directed_properties(g: SimpleMarkedGraph) -> DirectedProperties:
    """Acyclicity and transitive closure of the directed part."""
    nesting = directed_projection(g)
    return DirectedProperties(
        acyclic=nx.is_directed_acyclic_graph(nesting),
        transitively_closed=is_transitively_closed(nesting),
    )


def projection_as_marked(g: SimpleMarkedGraph, projection: Optional[str]) -> SimpleMarkedGraph:
    """``overlap`` keeps undirected edges, ``nesting`` directed ones, None both."""
    if projection is None:
        return g
    if projection == "overlap":
        return g.restricted(directed=False)
    if projection == "nesting":
        return g.restricted(undirected=False)
    raise ValueError(f"unknown projection {projection!r}")


def relabel(g: SimpleMarkedGraph, mapping: Mapping[Identity, Identity]) -> SimpleMarkedGraph:
    """
    Rename vertices. Vertices missing from ``mapping`` keep their name; the
    full map must be a bijection on the vertex set that fixes m.
    """
    for source in mapping:
        if source not in g.signs:
            raise RelabelError(f"{source} is not a vertex")
    full = {v: mapping.get(v, v) for v in g.signs}
    if M in full and full[M] != M:
        raise RelabelError("relabeling must fix m")
    if any(target == M for source, target in full.items() if source != M):
        raise RelabelError("only m may be mapped to m")
    if set(full.values()) != set(full):
        raise RelabelError("mapping is not a bijection on the vertex set")

    return SimpleMarkedGraph(
        {full[v]: s for v, s in g.signs.items()},
        frozenset(frozenset(full[v] for v in e) for e in g.undirected),
        frozenset((full[x], full[y]) for x, y in g.directed),
    )
