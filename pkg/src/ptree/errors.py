"""Exceptions raised by the probability tree engine.

Every error the engine raises is a :py:class:`PtreeError`, so callers that
only need to know *that* something failed (like the :py:class:`TreeApi`
facade) can catch the base class.
"""

from typing import Any, List, Optional


class PtreeError(Exception):
    """The base of all engine errors."""


class UnknownVariableError(PtreeError):
    """An event or specification names a variable the tree does not know."""


class UnknownValueError(PtreeError):
    """A value is not in the domain of its variable."""


class PathNotFoundError(PtreeError):
    """A sequence of assignments does not trace a root-to-leaf route."""


class ZeroProbabilityError(PtreeError):
    """Conditioning (or renormalising) on something with probability zero."""


class OverlappingVariablesError(PtreeError):
    """Two collections of variables that must be disjoint share a variable."""


class DuplicateVariableError(PtreeError):
    """The same variable is named more than once where that is not allowed."""


class VariableNotInTreeError(PtreeError):
    """No node in the tree resolves the variable."""


class HypothesisOrderError(PtreeError):
    """The hypothesis variable is not resolved before the evidence variables."""


class SizeGuardError(PtreeError):
    """A construction would produce more leaves than permitted."""


class SelectorUnresolvedError(PtreeError):
    """A graft selector variable is not resolved on a path it must target."""


class InvalidDistributionError(PtreeError):
    """Probabilities outside [0, 1] or not summing to one."""


class PlanError(PtreeError):
    """An experiment plan is missing values or is badly formed."""


class TreeSyntaxError(PtreeError):
    """A tree document could not be parsed.

    :param message: What went wrong
    :param line: The 1-based line of the offending text
    :param column: The 1-based column of the offending text
    """

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line: int = line
        self.column: int = column


class ProbabilityFormatError(TreeSyntaxError):
    """A probability literal is not an exact rational in [0, 1]."""


class TreeValidationError(PtreeError):
    """A tree (usually a freshly parsed one) violates the structural rules.

    :param violations: The list of violations found
    :param message: An optional summary, otherwise the first violation is used
    """

    def __init__(self, violations: List[Any], message: Optional[str] = None):
        assert violations
        super().__init__(message or str(violations[0]))
        self.violations: List[Any] = violations


class LiteralSyntaxError(PtreeError):
    """An event or intervention literal (``X=x,Y=~y``) is badly formed."""
