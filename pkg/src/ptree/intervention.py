"""Interventions as mechanism rewrites.

Setting a variable replaces *every* mechanism that resolves it, wherever it
sits in the tree, with a point mass on the chosen value. Nothing else
changes, and zero-probability branches are kept.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
import logging
from typing import Dict, Mapping, Sequence

from ptree.errors import (
    DuplicateVariableError,
    UnknownValueError,
    VariableNotInTreeError,
)
from ptree.tree import ONE, ZERO, Branch, Node, ProbabilityTree

_LOGGER: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InterventionSpec:
    """Force ``variable`` to ``value``.

    :param variable: The variable whose mechanisms are replaced
    :param value: The forced outcome
    """

    variable: str
    value: str

    def __str__(self) -> str:
        return f"{self.variable}={self.value}"


def _rewrite(node: Node, variable: str, distribution: Mapping[str, Fraction]) -> Node:
    """Replaces the distribution of every node resolving ``variable``.
    Values absent from ``distribution`` get probability 0.
    """
    if node.is_leaf:
        return node
    return Node(
        variable=node.variable,
        branches=tuple(
            Branch(
                value=branch.value,
                prob=(
                    distribution.get(branch.value, ZERO)
                    if node.variable == variable
                    else branch.prob
                ),
                child=_rewrite(branch.child, variable, distribution),
            )
            for branch in node.branches
        ),
    )


def intervene(tree: ProbabilityTree, spec: InterventionSpec) -> ProbabilityTree:
    """Returns the tree that results from setting ``spec.variable`` to
    ``spec.value``.

    :param tree: The model (it is not modified)
    :param spec: The intervention
    """
    if spec.variable not in tree.domains or not tree.resolves(spec.variable):
        raise VariableNotInTreeError(f"No node resolves '{spec.variable}'")
    if spec.value not in tree.domains[spec.variable]:
        raise UnknownValueError(
            f"'{spec.value}' is not in the domain of '{spec.variable}'"
        )

    _LOGGER.debug("Intervening %s", spec)
    return ProbabilityTree(
        root=_rewrite(tree.root, spec.variable, {spec.value: ONE}),
        domains=tree.domains,
    )


def intervene_many(
    tree: ProbabilityTree, specs: Sequence[InterventionSpec]
) -> ProbabilityTree:
    """Applies several interventions on distinct variables.
    The order of ``specs`` does not matter.

    :param tree: The model
    :param specs: The interventions (at most one per variable)
    """
    seen: Dict[str, InterventionSpec] = {}
    for spec in specs:
        if spec.variable in seen:
            raise DuplicateVariableError(
                f"'{spec.variable}' is intervened more than once"
            )
        seen[spec.variable] = spec
    return reduce(intervene, specs, tree)
