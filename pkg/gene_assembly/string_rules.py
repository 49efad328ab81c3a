"""
String pointer rules.

General system: snr, spr, sdr. Simple system: snr, sspr, ssdr.

    snr_p   u1 p p u2             -> u1 u2
    spr_p   u1 p u2 -p u3         -> u1 inv(u2) u3
    sdr_p,q u1 p u2 q u3 p u4 q u5 -> u1 u4 u3 u2 u5
    sspr_p  as spr_p with |u2| = 1
    ssdr_p,q u1 p q u2 p q u3     -> u1 u2 u3

A rule is named by the first occurrence of its pointer as written, so
``sspr:-6`` and ``sspr:6`` are different instances. The general rules are
also allowed on extended legal strings; markers inside an inverted context
are inverted with it.

Reductions are listed in execution order. The composition
rho_n ... rho_2 rho_1 applies rho_1 first; ``composition_notation`` renders a
trace that way.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from gene_assembly.errors import GeneAssemblyError, ReductionAborted, RuleApplicationError, RuleSyntaxError, TokenParseError
from gene_assembly.strings import GeneString, GeneSymbol, invert, parse_gene_string, parse_symbol


logger = logging.getLogger(__name__)


class RuleKind(str, Enum):
    SNR = "snr"
    SPR = "spr"
    SDR = "sdr"
    SSPR = "sspr"
    SSDR = "ssdr"

    @property
    def is_double(self) -> bool:
        return self in (RuleKind.SDR, RuleKind.SSDR)


class RuleSystem(str, Enum):
    GENERAL = "general"
    SIMPLE = "simple"

    @property
    def kinds(self) -> FrozenSet[RuleKind]:
        if self is RuleSystem.GENERAL:
            return frozenset({RuleKind.SNR, RuleKind.SPR, RuleKind.SDR})
        return frozenset({RuleKind.SNR, RuleKind.SSPR, RuleKind.SSDR})


ALL_RULE_KINDS = frozenset(RuleKind)

SUCCESS_STRINGS = frozenset(
    parse_gene_string(text) for text in ("b e", "e b", "-e -b", "-b -e")
)


# ============================================================================
# DATA STRUCTURES
# ============================================================================


@dataclass(frozen=True)
class RuleInstance:
    """A string rule with its pointer parameter(s); the match site is informative only."""
    kind: RuleKind
    p: GeneSymbol
    q: Optional[GeneSymbol] = None
    match_site: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", RuleKind(self.kind))
        if not self.p.is_pointer:
            raise RuleSyntaxError(f"{self.kind.value}: parameter {self.p} is a marker")
        if self.kind.is_double:
            if self.q is None:
                raise RuleSyntaxError(f"{self.kind.value} needs two pointers")
            if not self.q.is_pointer:
                raise RuleSyntaxError(f"{self.kind.value}: parameter {self.q} is a marker")
            if self.p.identity == self.q.identity:
                raise RuleSyntaxError(f"{self.kind.value}: pointers must have different identities")
        elif self.q is not None:
            raise RuleSyntaxError(f"{self.kind.value} takes a single pointer")

    def located(self, site: Tuple[int, ...]) -> "RuleInstance":
        return RuleInstance(self.kind, self.p, self.q, tuple(site))

    @property
    def identities(self) -> Tuple[Any, ...]:
        if self.q is None:
            return (self.p.identity,)
        return (self.p.identity, self.q.identity)

    def render(self) -> str:
        params = self.p.render() if self.q is None else f"{self.p.render()},{self.q.render()}"
        return f"{self.kind.value}:{params}"

    def __str__(self) -> str:
        return self.render()

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "p": self.p.render()}
        if self.q is not None:
            data["q"] = self.q.render()
        if self.match_site is not None:
            data["match_site"] = list(self.match_site)
        return data


@dataclass(frozen=True)
class ReductionStep:
    rule: RuleInstance
    result: GeneString


@dataclass(frozen=True)
class ReductionTrace:
    """Record of a reduction: every rule applied and the string it produced."""
    initial: GeneString
    steps: Tuple[ReductionStep, ...] = ()
    success: bool = False

    @property
    def final(self) -> GeneString:
        return self.steps[-1].result if self.steps else self.initial

    @property
    def rules(self) -> Tuple[RuleInstance, ...]:
        return tuple(step.rule for step in self.steps)

    def composition_notation(self) -> str:
        """Right-to-left composition, last rule first."""
        return " ".join(rule.render() for rule in reversed(self.rules)) or "id"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "initial": self.initial.render(),
            "steps": [
                {"rule": step.rule.render(), "result": step.result.render()}
                for step in self.steps
            ],
            "final": self.final.render(),
            "success": self.success,
        }


# ============================================================================
# PARSING
# ============================================================================


def split_rule_list(text: str) -> List[str]:
    """
    Split ``"sspr:-6,ssdr:2,3,snr:4"`` into rule texts.

    A piece without a colon is the second parameter of the preceding rule.
    """
    pieces: List[str] = []
    for raw in text.split(","):
        piece = raw.strip()
        if not piece:
            continue
        if ":" in piece or not pieces:
            pieces.append(piece)
        else:
            pieces[-1] = f"{pieces[-1]},{piece}"
    return pieces


def parse_rule(text: str) -> RuleInstance:
    """Read ``snr:4``, ``sspr:-6``, ``sdr:2,4`` ..."""
    name, sep, params = text.strip().partition(":")
    if not sep:
        raise RuleSyntaxError(f"rule {text!r} lacks ':' between name and pointer")
    try:
        kind = RuleKind(name.strip().lower())
    except ValueError:
        raise RuleSyntaxError(f"unknown string rule {name!r}") from None
    try:
        symbols = [parse_symbol(token, i) for i, token in enumerate(params.split(","), start=1)]
    except TokenParseError as exc:
        raise RuleSyntaxError(f"rule {text!r}: {exc}") from exc
    if len(symbols) > 2:
        raise RuleSyntaxError(f"rule {text!r} has too many parameters")
    return RuleInstance(kind, symbols[0], symbols[1] if len(symbols) == 2 else None)


def parse_rule_list(text: str) -> List[RuleInstance]:
    return [parse_rule(piece) for piece in split_rule_list(text)]


# ============================================================================
# MATCHING
# ============================================================================


def _pair_of(s: GeneString, rule: RuleInstance, symbol: GeneSymbol) -> Tuple[int, int]:
    places = s.occurrences(symbol.identity)
    if len(places) != 2:
        raise RuleApplicationError(rule, f"pointer {symbol.identity} does not occur")
    return places[0], places[1]


def _match_single(s: GeneString, rule: RuleInstance) -> Tuple[int, int]:
    i, j = _pair_of(s, rule, rule.p)
    first, second = s.symbols[i], s.symbols[j]
    if rule.kind is RuleKind.SNR:
        if first.barred != second.barred:
            raise RuleApplicationError(rule, f"identity {rule.p.identity} is positive")
        if first != rule.p:
            raise RuleApplicationError(rule, f"the occurrences are {first}, not {rule.p}")
        if j != i + 1:
            raise RuleApplicationError(rule, f"occurrences of {rule.p.identity} are not adjacent")
        return i, j

    if first.barred == second.barred:
        raise RuleApplicationError(rule, f"identity {rule.p.identity} is negative")
    if first != rule.p:
        raise RuleApplicationError(rule, f"first occurrence is {first}, not {rule.p}")
    if rule.kind is RuleKind.SSPR and j - i - 1 != 1:
        raise RuleApplicationError(
            rule, f"interval of {rule.p.identity} holds {j - i - 1} symbols, expected exactly 1"
        )
    return i, j


def _match_double(s: GeneString, rule: RuleInstance) -> Tuple[int, int, int, int]:
    i1, i2 = _pair_of(s, rule, rule.p)
    j1, j2 = _pair_of(s, rule, rule.q)
    for a, b, symbol in ((i1, i2, rule.p), (j1, j2, rule.q)):
        if s.symbols[a] != s.symbols[b]:
            raise RuleApplicationError(rule, f"identity {symbol.identity} is positive")
        if s.symbols[a] != symbol:
            raise RuleApplicationError(rule, f"the occurrences are {s.symbols[a]}, not {symbol}")
    if not i1 < j1 < i2 < j2:
        raise RuleApplicationError(
            rule, f"pattern p q p q not found: {rule.p.identity} and {rule.q.identity} "
                  f"do not overlap in that order"
        )
    if rule.kind is RuleKind.SSDR and (j1 != i1 + 1 or j2 != i2 + 1):
        raise RuleApplicationError(
            rule, f"blocks {rule.p} {rule.q} are not adjacent at both occurrences"
        )
    return i1, j1, i2, j2


def match_site(s: GeneString, rule: RuleInstance) -> Tuple[int, ...]:
    """0-based occurrence positions matched by ``rule``; raises if it does not apply."""
    if rule.kind.is_double:
        site: Tuple[int, ...] = _match_double(s, rule)
    else:
        site = _match_single(s, rule)
    if rule.match_site is not None and tuple(rule.match_site) != site:
        raise RuleApplicationError(rule, f"match site {rule.match_site} differs from {site}")
    return site


def _rewrite(s: GeneString, kind: RuleKind, site: Tuple[int, ...]) -> GeneString:
    if kind is RuleKind.SNR:
        i, j = site
        return s[:i] + s[j + 1:]
    if kind in (RuleKind.SPR, RuleKind.SSPR):
        i, j = site
        return s[:i] + invert(s[i + 1:j]) + s[j + 1:]
    i1, j1, i2, j2 = site
    u1, u2, u3, u4, u5 = s[:i1], s[i1 + 1:j1], s[j1 + 1:i2], s[i2 + 1:j2], s[j2 + 1:]
    return u1 + u4 + u3 + u2 + u5


# ============================================================================
# OPERATIONS
# ============================================================================


def applicable_rules(s: GeneString, system: RuleSystem = RuleSystem.SIMPLE) -> FrozenSet[RuleInstance]:
    """Every rule instance of ``system`` whose pattern matches ``s``."""
    s.require_valid("rule applicability")
    system = RuleSystem(system)
    kinds = system.kinds
    found = set()
    pointers = [
        (identity, places) for identity, places in s.positions.items()
        if s.symbols[places[0]].is_pointer
    ]

    for _, (i, j) in pointers:
        first, second = s.symbols[i], s.symbols[j]
        if first == second:
            if j == i + 1 and RuleKind.SNR in kinds:
                found.add(RuleInstance(RuleKind.SNR, first, match_site=(i, j)))
        else:
            if RuleKind.SPR in kinds:
                found.add(RuleInstance(RuleKind.SPR, first, match_site=(i, j)))
            if RuleKind.SSPR in kinds and j - i == 2:
                found.add(RuleInstance(RuleKind.SSPR, first, match_site=(i, j)))

    if kinds & {RuleKind.SDR, RuleKind.SSDR}:
        negative = [(i, j) for _, (i, j) in pointers if s.symbols[i] == s.symbols[j]]
        for i1, i2 in negative:
            for j1, j2 in negative:
                if not i1 < j1 < i2 < j2:
                    continue
                p, q = s.symbols[i1], s.symbols[j1]
                site = (i1, j1, i2, j2)
                if RuleKind.SDR in kinds:
                    found.add(RuleInstance(RuleKind.SDR, p, q, site))
                if RuleKind.SSDR in kinds and j1 == i1 + 1 and j2 == i2 + 1:
                    found.add(RuleInstance(RuleKind.SSDR, p, q, site))
    return frozenset(found)


def all_applicable_rules(s: GeneString, kinds: Iterable[RuleKind] = ALL_RULE_KINDS) -> FrozenSet[RuleInstance]:
    """Applicable rules of both systems, filtered to ``kinds``."""
    wanted = frozenset(RuleKind(kind) for kind in kinds)
    found = set()
    for system in RuleSystem:
        if wanted & system.kinds:
            found |= {rule for rule in applicable_rules(s, system) if rule.kind in wanted}
    return frozenset(found)


def apply_rule(s: GeneString, r: RuleInstance) -> GeneString:
    """Rewrite ``s`` with ``r``; raises RuleApplicationError naming the failed condition."""
    s.require_valid(f"applying {r}")
    site = match_site(s, r)
    return _rewrite(s, r.kind, site)


def is_terminal_success(s: GeneString) -> bool:
    """λ for legal strings; be, eb, -e -b or -b -e for extended legal strings."""
    return len(s) == 0 or s in SUCCESS_STRINGS


def apply_reduction(s: GeneString, rules: Sequence[RuleInstance]) -> ReductionTrace:
    """
    Apply ``rules`` in execution order.

    Raises ReductionAborted carrying the partial trace when a step fails.
    """
    steps: List[ReductionStep] = []
    current = s
    for index, rule in enumerate(rules, start=1):
        try:
            current.require_valid(f"applying {rule}")
            site = match_site(current, rule)
        except GeneAssemblyError as exc:
            partial = ReductionTrace(s, tuple(steps), False)
            logger.debug("reduction of %s aborted at step %d: %s", s, index, exc)
            raise ReductionAborted(index, rule, partial, exc) from exc
        current = _rewrite(current, rule.kind, site)
        steps.append(ReductionStep(rule.located(site), current))
    trace = ReductionTrace(s, tuple(steps), is_terminal_success(current))
    logger.debug("reduction of %s: %d steps, success=%s", s, len(steps), trace.success)
    return trace
