"""
Exception hierarchy for the gene assembly toolkit.

Library code raises these; the command line maps them onto exit codes.
"""

from typing import Any, Optional


class GeneAssemblyError(Exception):
    """Base class for every error raised by this package."""


# ============================================================================
# INPUT ERRORS
# ============================================================================


class TokenParseError(GeneAssemblyError, ValueError):
    """A token of a gene string could not be read."""

    def __init__(self, message: str, position: int):
        super().__init__(f"token {position}: {message}")
        self.position = position


class ValidityError(GeneAssemblyError, ValueError):
    """An operation needs a legal or extended legal string."""


class UnknownIdentityError(GeneAssemblyError, KeyError):
    """Pointer identity not present in the string or graph."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class DescriptorError(GeneAssemblyError, ValueError):
    """Malformed MDS descriptor."""


class RuleSyntaxError(GeneAssemblyError, ValueError):
    """Rule text such as ``sspr:-6`` could not be parsed."""


class GraphStructureError(GeneAssemblyError, ValueError):
    """A simple marked graph violates its structural invariants."""


class RelabelError(GeneAssemblyError, ValueError):
    """Relabeling mapping is not a bijection fixing m."""


class PreconditionError(GeneAssemblyError, ValueError):
    """An operation was called outside its documented precondition."""


class CertificateError(GeneAssemblyError, ValueError):
    """Malformed ordering certificate."""


class UndefinedSuccessError(GeneAssemblyError, ValueError):
    """Graph success is only defined for graphs containing m."""


# ============================================================================
# RULE APPLICATION
# ============================================================================


class RuleApplicationError(GeneAssemblyError):
    """A string rule does not match the string it was applied to."""

    def __init__(self, rule: Any, condition: str):
        super().__init__(f"{rule} is not applicable: {condition}")
        self.rule = rule
        self.condition = condition


class GraphRuleError(GeneAssemblyError):
    """A graph rule is not applicable; ``condition`` names the violated check."""

    def __init__(self, rule: Any, condition: str, detail: str = ""):
        text = f"{rule} is not applicable: {condition}"
        if detail:
            text += f" ({detail})"
        super().__init__(text)
        self.rule = rule
        self.condition = condition


class ReductionAborted(GeneAssemblyError):
    """
    A reduction stopped at an inapplicable step.

    ``trace`` holds every step applied before the failure and ``step`` is the
    1-based position of the rule that failed.
    """

    def __init__(self, step: int, rule: Any, trace: Any, cause: GeneAssemblyError):
        super().__init__(f"step {step}: {cause}")
        self.step = step
        self.rule = rule
        self.trace = trace
        self.cause = cause


# ============================================================================
# CAPS
# ============================================================================


class EnumerationCapError(GeneAssemblyError):
    """Instance too large for exhaustive enumeration."""

    def __init__(self, size: int, cap: int, what: str = "instance"):
        super().__init__(f"{what} size {size} exceeds the enumeration cap {cap}")
        self.size = size
        self.cap = cap


class SearchInconclusive(GeneAssemblyError):
    """The state cap was hit before the search could decide."""

    def __init__(self, states_explored: int, cap: Optional[int] = None):
        super().__init__(
            f"search inconclusive after {states_explored} states (cap {cap})"
        )
        self.states_explored = states_explored
        self.cap = cap
