"""The probability tree, the core data structure of the engine.

A tree is an immutable value. Each internal :py:class:`Node` is a causal
mechanism that resolves one variable, choosing one of its (ordered) branches
with an exact rational probability. Leaves are empty markers. The set of
root-to-leaf paths is the sample space, so every probability the engine
reports is a sum of path products.

Different branches may resolve the variables in different orders, which is
how a single tree carries several competing causal hypotheses.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

from ptree.errors import PathNotFoundError, UnknownValueError, UnknownVariableError

# A sequence of (variable, value) pairs in resolution order
Assignment = Tuple[Tuple[str, str], ...]
# A partial assignment of variables to values
Event = Mapping[str, str]
# Anything Fraction() accepts as an exact probability
ProbabilityLike = Union[Fraction, int, str]

ZERO: Fraction = Fraction(0)
ONE: Fraction = Fraction(1)

_LOGGER: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Branch:
    """One outcome of a mechanism.

    :param value: The value the mechanism's variable takes on this branch
    :param prob: The exact probability of taking the branch
    :param child: The node reached (a leaf if nothing more is resolved)
    """

    value: str
    prob: Fraction
    child: "Node"


@dataclass(frozen=True)
class Node:
    """A mechanism resolving ``variable`` or, when ``variable`` is None, a leaf."""

    variable: Optional[str] = None
    branches: Tuple[Branch, ...] = ()

    @property
    def is_leaf(self) -> bool:
        """True if the node resolves nothing."""
        return self.variable is None

    def branch(self, value: str) -> Optional[Branch]:
        """Returns the branch labelled ``value``, or None."""
        for branch in self.branches:
            if branch.value == value:
                return branch
        return None

    def distribution(self) -> Dict[str, Fraction]:
        """The branch probabilities keyed by value, in authored order."""
        return {branch.value: branch.prob for branch in self.branches}


LEAF: Node = Node()
"""The (only) leaf value. All leaves compare equal."""


def make_node(
    variable: str, branches: Sequence[Tuple[str, ProbabilityLike, Optional[Node]]]
) -> Node:
    """A convenience constructor for internal nodes.

    :param variable: The variable the node resolves
    :param branches: ``(value, probability, child)`` triples where the
        probability is anything ``Fraction()`` accepts (e.g. ``"3/4"``)
        and a None child means a leaf
    """
    assert variable
    return Node(
        variable=variable,
        branches=tuple(
            Branch(value=value, prob=Fraction(prob), child=child or LEAF)
            for value, prob, child in branches
        ),
    )


def infer_domains(root: Node) -> Dict[str, Tuple[str, ...]]:
    """Collects every variable's domain as the union of the branch values of
    all nodes resolving it, in first-seen (depth-first) order.
    """
    domains: Dict[str, List[str]] = {}
    for _, node in iter_nodes(root):
        if node.is_leaf:
            continue
        assert node.variable
        values: List[str] = domains.setdefault(node.variable, [])
        for branch in node.branches:
            if branch.value not in values:
                values.append(branch.value)
    return {variable: tuple(values) for variable, values in domains.items()}


@dataclass(frozen=True)
class ProbabilityTree:
    """A complete causal model: a variable registry and a root mechanism.

    If ``domains`` is not given it is inferred from the tree. Two trees are
    equal when their node structures (including probabilities and branch
    order) are equal.
    """

    root: Node = LEAF
    domains: Dict[str, Tuple[str, ...]] = field(default=None, compare=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        domains = infer_domains(self.root) if self.domains is None else self.domains
        object.__setattr__(
            self,
            "domains",
            {variable: tuple(values) for variable, values in domains.items()},
        )

    @property
    def variables(self) -> Tuple[str, ...]:
        """The registered variable names."""
        return tuple(self.domains)

    def domain(self, variable: str) -> Tuple[str, ...]:
        """Returns the domain of ``variable``."""
        if variable not in self.domains:
            raise UnknownVariableError(f"Unknown variable '{variable}'")
        return self.domains[variable]

    def resolves(self, variable: str) -> bool:
        """True if at least one node resolves ``variable``."""
        return any(node.variable == variable for _, node in iter_nodes(self.root))


@dataclass(frozen=True)
class Violation:
    """A broken structural rule, located by the path to the offending node.

    :param path: The assignments leading from the root to the node
    :param kind: A short category, e.g. ``normalization`` or ``duplicate-variable``
    :param message: A human-readable description
    """

    path: Assignment
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind} at {format_path(self.path)}: {self.message}"


def format_path(path: Assignment) -> str:
    """Renders a path as ``H=h/X=x`` (the root is ``<root>``)."""
    if not path:
        return "<root>"
    return "/".join(f"{variable}={value}" for variable, value in path)


def iter_nodes(root: Node) -> Iterator[Tuple[Assignment, Node]]:
    """Yields ``(path, node)`` for every node, depth-first, in branch order."""
    stack: List[Tuple[Assignment, Node]] = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for branch in reversed(node.branches):
            stack.append((path + ((node.variable, branch.value),), branch.child))  # type: ignore[operator]


def map_leaves(node: Node, replace: Callable[[Assignment], Node]) -> Node:
    """Returns a copy of ``node`` where every leaf is replaced by
    ``replace(path_to_leaf)``. Internal nodes keep their probabilities.
    """

    def _walk(current: Node, path: Assignment) -> Node:
        if current.is_leaf:
            return replace(path)
        return Node(
            variable=current.variable,
            branches=tuple(
                Branch(
                    value=branch.value,
                    prob=branch.prob,
                    child=_walk(
                        branch.child, path + ((current.variable, branch.value),)  # type: ignore[operator]
                    ),
                )
                for branch in current.branches
            ),
        )

    return _walk(node, ())


def count_leaves(node: Node) -> int:
    """The number of leaves below (and including) ``node``."""
    return sum(1 for _, current in iter_nodes(node) if current.is_leaf)


def validate(tree: ProbabilityTree) -> List[Violation]:
    """Checks every structural rule, returning all violations found.
    An empty list means the tree is valid.

    :param tree: The tree to check
    """
    violations: List[Violation] = []

    def _walk(node: Node, path: Assignment, resolved: Set[str]) -> None:
        if node.is_leaf:
            return
        variable: str = str(node.variable)

        if variable not in tree.domains:
            violations.append(
                Violation(path, "unknown-variable", f"'{variable}' is not registered")
            )
        if variable in resolved:
            violations.append(
                Violation(
                    path,
                    "duplicate-variable",
                    f"'{variable}' is already resolved on this path",
                )
            )

        seen: List[str] = []
        total: Fraction = ZERO
        for branch in node.branches:
            if not isinstance(branch.prob, Fraction) or not ZERO <= branch.prob <= ONE:
                violations.append(
                    Violation(
                        path,
                        "probability-range",
                        f"{variable}={branch.value} has probability {branch.prob}",
                    )
                )
            if branch.value in seen:
                violations.append(
                    Violation(
                        path,
                        "duplicate-value",
                        f"'{branch.value}' appears more than once",
                    )
                )
            elif variable in tree.domains and branch.value not in tree.domains[variable]:
                violations.append(
                    Violation(
                        path,
                        "unknown-value",
                        f"'{branch.value}' is not in the domain of '{variable}'",
                    )
                )
            seen.append(branch.value)
            total += Fraction(branch.prob)

        missing: List[str] = [
            value for value in tree.domains.get(variable, ()) if value not in seen
        ]
        if missing:
            violations.append(
                Violation(
                    path,
                    "missing-value",
                    f"'{variable}' has no branch for {', '.join(missing)}",
                )
            )
        if total != ONE:
            violations.append(
                Violation(
                    path,
                    "normalization",
                    f"branch probabilities of '{variable}' sum to {total}",
                )
            )

        for branch in node.branches:
            _walk(
                branch.child,
                path + ((variable, branch.value),),
                resolved | {variable},
            )

    _walk(tree.root, (), set())
    if violations:
        _LOGGER.debug("Tree has %d violation(s)", len(violations))
    return violations


def check_event(tree: ProbabilityTree, event: Event) -> None:
    """Raises if ``event`` names a variable or value the tree does not know."""
    for variable, value in event.items():
        if value not in tree.domain(variable):
            raise UnknownValueError(
                f"'{value}' is not in the domain of '{variable}'"
                f" ({', '.join(tree.domains[variable])})"
            )


def match_probability(node: Node, event: Event) -> Fraction:
    """The probability, starting at ``node``, of following a path that
    assigns every literal of ``event``. Paths that end without resolving a
    mentioned variable do not match.
    """
    if node.is_leaf:
        return ONE if not event else ZERO
    wanted: Optional[str] = event.get(str(node.variable))
    remaining: Event = (
        {k: v for k, v in event.items() if k != node.variable}
        if wanted is not None
        else event
    )
    total: Fraction = ZERO
    for branch in node.branches:
        if wanted is not None and branch.value != wanted:
            continue
        if branch.prob == ZERO:
            continue
        total += branch.prob * match_probability(branch.child, remaining)
    return total


def event_probability(tree: ProbabilityTree, event: Event) -> Fraction:
    """Returns the probability of ``event``, the sum of the path probabilities
    of every leaf whose path assigns all of the event's literals.

    :param tree: The model
    :param event: A partial assignment (an empty event is the sure event)
    """
    check_event(tree, event)
    return match_probability(tree.root, event)


def path_probability(
    tree: ProbabilityTree, leaf_path: Sequence[Tuple[str, str]]
) -> Fraction:
    """Returns the product of the branch probabilities along a root-to-leaf path.

    :param tree: The model
    :param leaf_path: The ``(variable, value)`` pairs in resolution order
    """
    node: Node = tree.root
    probability: Fraction = ONE
    for index, (variable, value) in enumerate(leaf_path):
        branch: Optional[Branch] = (
            node.branch(value) if node.variable == variable else None
        )
        if branch is None:
            raise PathNotFoundError(
                f"No branch {variable}={value} at"
                f" {format_path(tuple(leaf_path[:index]))}"
            )
        probability *= branch.prob
        node = branch.child
    if not node.is_leaf:
        raise PathNotFoundError(
            f"Path {format_path(tuple(leaf_path))} ends at a node resolving"
            f" '{node.variable}', not at a leaf"
        )
    return probability


def enumerate_leaves(tree: ProbabilityTree) -> List[Tuple[Assignment, Fraction]]:
    """Returns every root-to-leaf path with its probability, in branch order."""
    leaves: List[Tuple[Assignment, Fraction]] = []

    def _walk(node: Node, path: Assignment, probability: Fraction) -> None:
        if node.is_leaf:
            leaves.append((path, probability))
            return
        for branch in node.branches:
            _walk(
                branch.child,
                path + ((str(node.variable), branch.value),),
                probability * branch.prob,
            )

    _walk(tree.root, (), ONE)
    return leaves
