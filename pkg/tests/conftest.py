"""Shared fixtures and hypothesis strategies."""

from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Set, Tuple

from hypothesis import strategies as st
import pytest

from ptree.dsl import parse
from ptree.tree import LEAF, Branch, Node, ProbabilityTree

PROJECT_DIR: Path = Path(__file__).resolve().parent.parent
TREES_DIR: Path = PROJECT_DIR / "trees"
PLANS_DIR: Path = PROJECT_DIR / "plans"
LIGHT_DEVICE_FILE: Path = TREES_DIR / "light_device.ptree"
GREEN_ON_FILE: Path = TREES_DIR / "light_device_green_on.ptree"

# Leaf probabilities of the light device, in branch order
LIGHT_DEVICE_LEAVES: List[Fraction] = [
    Fraction(n, 16) for n in (3, 1, 1, 3, 3, 1, 1, 3)
]
GREEN_ON_LEAVES: List[Fraction] = [
    Fraction(3, 8),
    Fraction(1, 8),
    Fraction(0),
    Fraction(0),
    Fraction(1, 4),
    Fraction(0),
    Fraction(1, 4),
    Fraction(0),
]


@pytest.fixture(name="light_tree")
def fixture_light_tree() -> ProbabilityTree:
    """The two-light device, read from its document."""
    return parse(LIGHT_DEVICE_FILE.read_text(encoding="utf8"))


@pytest.fixture(name="green_on_tree")
def fixture_green_on_tree() -> ProbabilityTree:
    """The two-light device after turning the green light on."""
    return parse(GREEN_ON_FILE.read_text(encoding="utf8"))


@st.composite
def distributions(draw, size: int) -> List[Fraction]:
    """Random exact distributions over ``size`` outcomes (zeros allowed)."""
    weights: List[int] = draw(
        st.lists(st.integers(0, 4), min_size=size, max_size=size)
    )
    if not any(weights):
        weights[draw(st.integers(0, size - 1))] = 1
    total: int = sum(weights)
    return [Fraction(weight, total) for weight in weights]


def _domains(draw, count: int, prefix: str = "V") -> Dict[str, Tuple[str, ...]]:
    domains: Dict[str, Tuple[str, ...]] = {}
    for index in range(count):
        size: int = draw(st.integers(2, 3))
        domains[f"{prefix}{index}"] = tuple(
            f"{prefix.lower()}{index}_{j}" for j in range(size)
        )
    return domains


def _random_node(
    draw,
    domains: Dict[str, Tuple[str, ...]],
    unused: Set[str],
    depth: int,
    max_depth: int,
) -> Node:
    """A random mechanism over ``unused`` where each branch picks its own
    next variable (so resolution orders differ across branches).
    """
    if depth >= max_depth or not unused:
        return LEAF
    if depth and draw(st.integers(0, 2)) == 0:
        return LEAF
    variable: str = draw(st.sampled_from(sorted(unused)))
    probabilities = draw(distributions(len(domains[variable])))
    return Node(
        variable=variable,
        branches=tuple(
            Branch(
                value,
                probability,
                _random_node(draw, domains, unused - {variable}, depth + 1, max_depth),
            )
            for value, probability in zip(domains[variable], probabilities)
        ),
    )


@st.composite
def probability_trees(
    draw, max_depth: int = 4, max_variables: int = 4
) -> ProbabilityTree:
    """Random valid trees with binary or ternary variables."""
    domains = _domains(draw, draw(st.integers(1, max_variables)))
    return ProbabilityTree(root=_random_node(draw, domains, set(domains), 0, max_depth))


@st.composite
def hypothesis_templates(draw, max_depth: int = 2) -> ProbabilityTree:
    """Random single-trial models with a hypothesis ``H`` (two or three
    values, each with positive prior) at the root.
    """
    domains = _domains(draw, 3)
    values: Tuple[str, ...] = tuple(f"h{j}" for j in range(draw(st.integers(2, 3))))
    weights: List[int] = draw(
        st.lists(st.integers(1, 4), min_size=len(values), max_size=len(values))
    )
    return ProbabilityTree(
        root=Node(
            variable="H",
            branches=tuple(
                Branch(
                    value,
                    Fraction(weight, sum(weights)),
                    _random_node(draw, domains, set(domains), 0, max_depth),
                )
                for value, weight in zip(values, weights)
            ),
        )
    )


@st.composite
def events(draw, tree: ProbabilityTree) -> Dict[str, str]:
    """Random events over the variables of ``tree``."""
    variables: List[str] = draw(
        st.lists(st.sampled_from(tree.variables), unique=True)
        if tree.variables
        else st.just([])
    )
    return {
        variable: draw(st.sampled_from(tree.domains[variable]))
        for variable in variables
    }
