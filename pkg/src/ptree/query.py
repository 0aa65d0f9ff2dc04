"""Conditioning and conditional probabilities over events."""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Dict

from ptree.errors import OverlappingVariablesError, ZeroProbabilityError
from ptree.tree import (
    ZERO,
    Branch,
    Event,
    Node,
    ProbabilityTree,
    check_event,
    event_probability,
    match_probability,
)

_LOGGER: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionalQuery:
    """P(target | given). The two events must not share a variable.

    :param target: The event whose probability is wanted
    :param given: The conditioning event (empty means the sure event)
    """

    target: Dict[str, str] = field(default_factory=dict)
    given: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        shared = set(self.target) & set(self.given)
        if shared:
            raise OverlappingVariablesError(
                f"Target and given both mention {', '.join(sorted(shared))}"
            )


def conditional_probability(tree: ProbabilityTree, query: ConditionalQuery) -> Fraction:
    """Returns P(target | given) exactly.

    :param tree: The model
    :param query: The target and conditioning events
    """
    given_probability: Fraction = event_probability(tree, query.given)
    if given_probability == ZERO:
        raise ZeroProbabilityError(
            f"Cannot condition on {_describe(query.given)}, it has probability 0"
        )
    joint: Fraction = event_probability(tree, {**query.target, **query.given})
    return joint / given_probability


def condition(tree: ProbabilityTree, given: Event) -> ProbabilityTree:
    """Returns a new tree whose event probabilities are those of ``tree``
    conditioned on ``given``.

    Each reachable node is renormalised by the probability that ``given`` can
    still be satisfied below each of its branches. Branches incompatible with
    ``given`` get probability 0. Nodes that become unreachable keep their
    original distributions.

    :param tree: The model
    :param given: The conditioning event
    """
    check_event(tree, given)
    if match_probability(tree.root, given) == ZERO:
        raise ZeroProbabilityError(
            f"Cannot condition on {_describe(given)}, it has probability 0"
        )

    def _walk(node: Node, pending: Event) -> Node:
        if node.is_leaf:
            return node
        wanted = pending.get(str(node.variable))
        remaining: Event = (
            {k: v for k, v in pending.items() if k != node.variable}
            if wanted is not None
            else pending
        )
        weights = [
            ZERO
            if wanted is not None and branch.value != wanted
            else branch.prob * match_probability(branch.child, remaining)
            for branch in node.branches
        ]
        total: Fraction = sum(weights, ZERO)
        if total == ZERO:
            # Unreachable given the evidence
            return node
        return Node(
            variable=node.variable,
            branches=tuple(
                Branch(
                    value=branch.value,
                    prob=weight / total,
                    child=_walk(branch.child, remaining) if weight else branch.child,
                )
                for branch, weight in zip(node.branches, weights)
            ),
        )

    _LOGGER.debug("Conditioning on %s", _describe(given))
    return ProbabilityTree(root=_walk(tree.root, given), domains=tree.domains)


def _describe(event: Event) -> str:
    if not event:
        return "the sure event"
    return ",".join(f"{variable}={value}" for variable, value in event.items())
