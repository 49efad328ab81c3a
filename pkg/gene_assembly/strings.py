"""
Gene strings: sequences of pointers and markers.

A legal string holds every pointer identity exactly twice (barred and
unbarred occurrences counted together). An extended legal string also
carries one occurrence of ``b`` and one of ``e``, possibly barred; after
the markers are erased it must be legal.

Token format: whitespace separated, a bar is a leading ``-``
(``-2``, ``-e``). On input the Unicode minus sign and a combining overbar
(``2̄``, ``ē``) are accepted as well; ``λ`` alone denotes the empty string.
"""

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from gene_assembly.errors import (
    DescriptorError,
    TokenParseError,
    UnknownIdentityError,
    ValidityError,
)


# ============================================================================
# ALPHABET
# ============================================================================

M = "m"                         # identity shared by both markers
MARKER_LETTERS = ("b", "e")
BAR_PREFIXES = ("-", "\u2212")     # ASCII hyphen, Unicode minus
COMBINING_BARS = ("\u0304", "\u0305")  # combining macron, combining overline
EMPTY_TOKEN = "\u03bb"

Identity = Union[int, str]

_POINTER_RE = re.compile(r"^\d+$")
_MDS_RE = re.compile(r"^(?P<bar>[-\u2212]?)[Mm]?(?P<index>\d+)$")


def identity_sort_key(identity: Identity) -> Tuple[int, int]:
    """Order pointer identities numerically with m last."""
    if identity == M:
        return (1, 0)
    return (0, int(identity))


def parse_identity(text: Union[str, int]) -> Identity:
    """Read ``"4"``, ``4`` or ``"m"`` as an identity."""
    if isinstance(text, int) and not isinstance(text, bool):
        if text < 2:
            raise ValueError(f"not a pointer identity: {text}")
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a pointer identity: {text!r}")
    text = text.strip()
    if text == M:
        return M
    if _POINTER_RE.match(text) and int(text) >= 2:
        return int(text)
    raise ValueError(f"not a pointer identity: {text!r}")


def format_identity(identity: Identity) -> str:
    return str(identity)


class Sign(str, Enum):
    POSITIVE = "+"
    NEGATIVE = "-"

    def flipped(self) -> "Sign":
        return Sign.NEGATIVE if self is Sign.POSITIVE else Sign.POSITIVE


class SymbolKind(str, Enum):
    POINTER = "pointer"
    MARKER = "marker"


# ============================================================================
# DATA STRUCTURES
# ============================================================================


@dataclass(frozen=True)
class GeneSymbol:
    """One occurrence: a pointer (integer >= 2) or a marker b/e, maybe barred."""
    value: Union[int, str]
    barred: bool = False

    def __post_init__(self):
        if isinstance(self.value, bool):
            raise ValueError("symbol value must be an integer or a marker letter")
        if isinstance(self.value, int):
            if self.value < 2:
                raise ValueError(f"pointer values start at 2, got {self.value}")
        elif self.value not in MARKER_LETTERS:
            raise ValueError(f"unknown marker letter {self.value!r}")

    @classmethod
    def pointer(cls, value: int, barred: bool = False) -> "GeneSymbol":
        return cls(int(value), barred)

    @classmethod
    def marker(cls, letter: str, barred: bool = False) -> "GeneSymbol":
        return cls(letter, barred)

    @property
    def kind(self) -> SymbolKind:
        return SymbolKind.MARKER if self.is_marker else SymbolKind.POINTER

    @property
    def is_marker(self) -> bool:
        return isinstance(self.value, str)

    @property
    def is_pointer(self) -> bool:
        return not self.is_marker

    @property
    def identity(self) -> Identity:
        """The unbarred name; both markers share the identity m."""
        return M if self.is_marker else self.value

    def inverted(self) -> "GeneSymbol":
        return GeneSymbol(self.value, not self.barred)

    def render(self) -> str:
        return ("-" if self.barred else "") + str(self.value)

    def __str__(self) -> str:
        return self.render()

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "value": self.value, "barred": self.barred}


class ValidityKind(str, Enum):
    LEGAL = "legal"
    EXTENDED_LEGAL = "extended-legal"
    INVALID = "invalid"


@dataclass(frozen=True)
class Validity:
    kind: ValidityKind
    reason: Optional[str] = None

    @property
    def is_valid(self) -> bool:
        return self.kind is not ValidityKind.INVALID

    def __str__(self) -> str:
        if self.reason:
            return f"{self.kind.value} ({self.reason})"
        return self.kind.value


@dataclass(frozen=True)
class GeneString:
    """Immutable sequence of gene symbols with its validity class."""
    symbols: Tuple[GeneSymbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    @cached_property
    def validity(self) -> Validity:
        return classify(self.symbols)

    @property
    def is_legal(self) -> bool:
        return self.validity.kind is ValidityKind.LEGAL

    @property
    def is_extended_legal(self) -> bool:
        return self.validity.kind is ValidityKind.EXTENDED_LEGAL

    @property
    def is_valid(self) -> bool:
        return self.validity.is_valid

    def require_valid(self, operation: str = "operation") -> None:
        """Raise ValidityError unless the string is legal or extended legal."""
        if not self.is_valid:
            raise ValidityError(f"{operation} needs a (extended) legal string: "
                                f"{self.render() or EMPTY_TOKEN} is {self.validity}")

    @cached_property
    def positions(self) -> Dict[Identity, Tuple[int, ...]]:
        """0-based positions of the occurrences of each identity."""
        found: Dict[Identity, List[int]] = {}
        for index, symbol in enumerate(self.symbols):
            found.setdefault(symbol.identity, []).append(index)
        return {identity: tuple(places) for identity, places in found.items()}

    @property
    def domain(self) -> Tuple[Identity, ...]:
        return tuple(sorted(self.positions, key=identity_sort_key))

    def occurrences(self, identity: Identity) -> Tuple[int, ...]:
        return self.positions.get(identity, ())

    def render(self) -> str:
        return " ".join(symbol.render() for symbol in self.symbols)

    def __str__(self) -> str:
        return self.render() or EMPTY_TOKEN

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[GeneSymbol]:
        return iter(self.symbols)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return GeneString(self.symbols[index])
        return self.symbols[index]

    def __add__(self, other: "GeneString") -> "GeneString":
        return GeneString(self.symbols + tuple(other.symbols))

    def to_json(self) -> List[Dict[str, Any]]:
        return [symbol.to_dict() for symbol in self.symbols]


@dataclass(frozen=True)
class PointerProfile:
    """Sign and interval of one identity; the span is 1-based and inclusive."""
    identity: Identity
    sign: Sign
    interval_span: Tuple[int, int]
    interval_content: GeneString
    interval: GeneString

    def to_dict(self) -> Dict[str, Any]:
        return {
            "identity": self.identity,
            "sign": self.sign.value,
            "interval_span": list(self.interval_span),
            "interval_content": self.interval_content.render(),
            "interval": self.interval.render(),
        }


@dataclass(frozen=True)
class MdsDescriptor:
    """
    Order and orientation of the MDSs M_1..M_kappa in the micronuclear gene.

    ``entries`` holds ``(index, inverted)`` pairs in MIC order.
    """
    entries: Tuple[Tuple[int, bool], ...]
    kappa: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((int(i), bool(inv)) for i, inv in self.entries))

    def validate(self) -> None:
        if self.kappa < 2:
            raise DescriptorError(f"kappa must be at least 2, got {self.kappa}")
        counts = Counter(index for index, _ in self.entries)
        out_of_range = sorted(i for i in counts if not 1 <= i <= self.kappa)
        if out_of_range:
            raise DescriptorError(f"MDS index out of range 1..{self.kappa}: {out_of_range}")
        duplicates = sorted(i for i, n in counts.items() if n > 1)
        if duplicates:
            raise DescriptorError(f"duplicate MDS index: {duplicates}")
        missing = sorted(set(range(1, self.kappa + 1)) - set(counts))
        if missing:
            raise DescriptorError(f"missing MDS index: {missing}")

    def render(self) -> str:
        return " ".join(("-" if inv else "") + f"M{i}" for i, inv in self.entries)


# ============================================================================
# CLASSIFICATION
# ============================================================================


def classify(symbols: Iterable[GeneSymbol]) -> Validity:
    """Classify a symbol sequence as legal, extended legal or invalid."""
    pointer_counts: Counter = Counter()
    marker_counts: Counter = Counter()
    for symbol in symbols:
        if symbol.is_marker:
            marker_counts[symbol.value] += 1
        else:
            pointer_counts[symbol.value] += 1

    for identity in sorted(pointer_counts):
        count = pointer_counts[identity]
        if count != 2:
            times = "once" if count == 1 else f"{count} times"
            return Validity(ValidityKind.INVALID, f"identity {identity} occurs {times}")

    if not marker_counts:
        return Validity(ValidityKind.LEGAL)
    if marker_counts["b"] == 1 and marker_counts["e"] == 1:
        return Validity(ValidityKind.EXTENDED_LEGAL)
    return Validity(
        ValidityKind.INVALID,
        f"expected one b-occurrence and one e-occurrence, found "
        f"{marker_counts['b']} b and {marker_counts['e']} e",
    )


# ============================================================================
# PARSING
# ============================================================================


def parse_symbol(token: str, position: int = 1) -> GeneSymbol:
    """Read one token; ``position`` is reported in errors (1-based)."""
    text = unicodedata.normalize("NFD", token.strip())
    barred = False
    if text[:1] in BAR_PREFIXES:
        barred = True
        text = text[1:]
    if text[-1:] in COMBINING_BARS:
        if barred:
            raise TokenParseError(f"{token!r} carries two bars", position)
        barred = True
        text = text[:-1]
    if not text:
        raise TokenParseError(f"empty symbol in {token!r}", position)
    if text in MARKER_LETTERS:
        return GeneSymbol.marker(text, barred)
    if _POINTER_RE.match(text):
        value = int(text)
        if value < 2:
            raise TokenParseError(f"pointer values start at 2, got {value}", position)
        return GeneSymbol.pointer(value, barred)
    raise TokenParseError(f"unknown symbol {token!r}", position)


def parse_gene_string(text: Union[str, Sequence[str]]) -> GeneString:
    """
    Parse a token sequence into a GeneString.

    Validity problems are classified on the result, not raised; only
    malformed tokens raise TokenParseError.
    """
    tokens = text.split() if isinstance(text, str) else [t for t in text]
    if tokens == [EMPTY_TOKEN]:
        return GeneString()
    return GeneString(tuple(parse_symbol(token, i) for i, token in enumerate(tokens, start=1)))


def gene_string_from_json(items: Sequence[Dict[str, Any]]) -> GeneString:
    """Inverse of ``GeneString.to_json``."""
    symbols = []
    for position, item in enumerate(items, start=1):
        try:
            kind = item["kind"]
            value = item["value"]
            barred = bool(item.get("barred", False))
            if kind == SymbolKind.POINTER.value:
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ValueError(f"pointer value must be an integer, got {value!r}")
                symbols.append(GeneSymbol.pointer(value, barred))
            elif kind == SymbolKind.MARKER.value:
                symbols.append(GeneSymbol.marker(value, barred))
            else:
                raise ValueError(f"unknown kind {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise TokenParseError(str(exc), position) from exc
    return GeneString(tuple(symbols))


def parse_mds_descriptor(text: str, kappa: Optional[int] = None) -> MdsDescriptor:
    """
    Read ``"M3 M4 -M2 M1"`` (the ``M`` is optional). ``kappa`` defaults to
    the largest index present.
    """
    entries = []
    for token in text.replace(",", " ").replace("[", " ").replace("]", " ").split():
        found = _MDS_RE.match(token.strip())
        if not found:
            raise DescriptorError(f"malformed MDS token {token!r}")
        entries.append((int(found.group("index")), bool(found.group("bar"))))
    if not entries:
        raise DescriptorError("empty MDS descriptor")
    descriptor = MdsDescriptor(tuple(entries), kappa if kappa is not None else max(i for i, _ in entries))
    descriptor.validate()
    return descriptor


# ============================================================================
# OPERATIONS
# ============================================================================


def invert(s: GeneString) -> GeneString:
    """Reverse the string and toggle every bar."""
    return GeneString(tuple(symbol.inverted() for symbol in reversed(s.symbols)))


def remove_markers(s: GeneString) -> GeneString:
    """The rm morphism: erase b, e and their barred forms."""
    return GeneString(tuple(symbol for symbol in s.symbols if symbol.is_pointer))


def legal_image(s: GeneString) -> GeneString:
    """rm(s) of an extended legal string; always legal."""
    s.require_valid("legal image")
    return remove_markers(s)


def domain(s: GeneString) -> Tuple[Identity, ...]:
    """Identities occurring in ``s``, numerically ordered with m last."""
    return s.domain


def _require_identity(s: GeneString, q: Identity) -> Tuple[int, int]:
    s.require_valid("pointer profile")
    places = s.occurrences(q)
    if not places:
        raise UnknownIdentityError(f"identity {q} not in dom({s})")
    first, second = places
    return first, second


def is_positive(s: GeneString, q: Identity) -> bool:
    """Exactly one of the two occurrences of ``q`` is barred."""
    first, second = _require_identity(s, q)
    return s.symbols[first].barred != s.symbols[second].barred


def pointer_profile(s: GeneString, q: Identity) -> PointerProfile:
    """Sign, 1-based interval span and interval content of identity ``q``."""
    first, second = _require_identity(s, q)
    sign = Sign.POSITIVE if s.symbols[first].barred != s.symbols[second].barred else Sign.NEGATIVE
    return PointerProfile(
        identity=q,
        sign=sign,
        interval_span=(first + 1, second + 1),
        interval_content=s[first + 1:second],
        interval=s[first:second + 1],
    )


def _mds_pair(index: int, kappa: int) -> Tuple[GeneSymbol, GeneSymbol]:
    left = GeneSymbol.marker("b") if index == 1 else GeneSymbol.pointer(index)
    right = GeneSymbol.marker("e") if index == kappa else GeneSymbol.pointer(index + 1)
    return left, right


def from_mds_descriptor(d: MdsDescriptor) -> GeneString:
    """
    Pointer/marker string of a micronuclear gene.

    M_i contributes ``i i+1``, M_1 contributes ``b 2`` and M_kappa
    ``kappa e``; an inverted MDS contributes the inverse of its pair.
    """
    d.validate()
    symbols: List[GeneSymbol] = []
    for index, inverted in d.entries:
        pair = GeneString(_mds_pair(index, d.kappa))
        symbols.extend(invert(pair) if inverted else pair)
    return GeneString(tuple(symbols))
