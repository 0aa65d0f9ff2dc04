"""Textual events and interventions, e.g. ``X=x,Y=~y``.

An empty (or blank) string is the sure event.
"""

from typing import Dict, Iterable, List, Tuple

from ptree.errors import DuplicateVariableError, LiteralSyntaxError
from ptree.intervention import InterventionSpec

_LITERAL_SEPARATOR: str = ","
_ASSIGNMENT: str = "="


def _literal(text: str) -> Tuple[str, str]:
    variable, _, value = text.strip().partition(_ASSIGNMENT)
    variable, value = variable.strip(), value.strip()
    if not variable or not value:
        raise LiteralSyntaxError(f"Expected VAR=VALUE, found '{text.strip()}'")
    return variable, value


def parse_event(text: str) -> Dict[str, str]:
    """Parses ``"X=x,Y=~y"`` into ``{"X": "x", "Y": "~y"}``."""
    event: Dict[str, str] = {}
    if not text.strip():
        return event
    for literal in text.split(_LITERAL_SEPARATOR):
        variable, value = _literal(literal)
        if variable in event:
            raise DuplicateVariableError(f"'{variable}' appears more than once")
        event[variable] = value
    return event


def parse_interventions(literals: Iterable[str]) -> List[InterventionSpec]:
    """Parses ``["X=x", "Y=y,Z=z"]`` into intervention specs.
    Each string may hold several comma-separated literals.
    """
    specs: List[InterventionSpec] = []
    for text in literals:
        for variable, value in parse_event(text).items():
            if any(spec.variable == variable for spec in specs):
                raise DuplicateVariableError(f"'{variable}' is intervened more than once")
            specs.append(InterventionSpec(variable, value))
    return specs
