"""Extending trees with new variables, and the two-device construction.

A second device (two spinners, U and V) is appended below the two-light
tree. Which spinner drives the other is tied to the same hypothesis that
decides which light drives the other, so evidence gathered on the lights
carries over to the spinners. An unconstrained variant, with one hypothesis
value per combination of orderings, is provided for contrast.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
import logging
from typing import Dict, List, Sequence, Tuple

from ptree.errors import (
    InvalidDistributionError,
    OverlappingVariablesError,
    SelectorUnresolvedError,
    TreeValidationError,
    UnknownValueError,
)
from ptree.inference import Posterior
from ptree.tree import (
    ONE,
    ZERO,
    LEAF,
    Assignment,
    Node,
    ProbabilityLike,
    ProbabilityTree,
    Violation,
    enumerate_leaves,
    make_node,
    map_leaves,
    path_probability,
    validate,
)

# Variable and value names of the two devices
HYPOTHESIS: str = "H"
GREEN_CAUSES_RED: str = "h"
RED_CAUSES_GREEN: str = "~h"
GREEN_LIGHT: str = "X"
RED_LIGHT: str = "Y"
GREEN_LIGHT_VALUES: Tuple[str, str] = ("x", "~x")
RED_LIGHT_VALUES: Tuple[str, str] = ("y", "~y")
GREEN_SPINNER: str = "U"
RED_SPINNER: str = "V"
SPINNER_VALUES: Tuple[str, str] = ("horizontal", "vertical")

# Hypothesis values of the unconstrained device,
# lights ordering first, spinners ordering second.
UNCONSTRAINED_HYPOTHESES: Tuple[str, ...] = ("xy_uv", "xy_vu", "yx_uv", "yx_vu")

_LOGGER: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraftSpec:
    """Append ``subtree`` at every leaf below the branch ``selector``.

    :param selector: The ``(variable, value)`` branch to graft under
    :param subtree: The fragment appended at each selected leaf
    """

    selector: Tuple[str, str]
    subtree: Node


def _merge_domains(
    first: Dict[str, Tuple[str, ...]], second: Dict[str, Tuple[str, ...]]
) -> Dict[str, Tuple[str, ...]]:
    merged: Dict[str, Tuple[str, ...]] = dict(first)
    for variable, values in second.items():
        existing = merged.get(variable, ())
        merged[variable] = existing + tuple(v for v in values if v not in existing)
    return merged


def _graft_one(tree: ProbabilityTree, spec: GraftSpec) -> ProbabilityTree:
    variable, value = spec.selector
    if value not in tree.domain(variable):
        raise UnknownValueError(f"'{value}' is not in the domain of '{variable}'")

    fragment = ProbabilityTree(root=spec.subtree)
    violations: List[Violation] = validate(fragment)
    if violations:
        raise TreeValidationError(violations, f"Invalid graft subtree: {violations[0]}")
    fragment_variables = set(fragment.domains)

    def _replace(path: Assignment) -> Node:
        assignment: Dict[str, str] = dict(path)
        if variable not in assignment:
            if path_probability(tree, path) > ZERO:
                raise SelectorUnresolvedError(
                    f"'{variable}' is not resolved on a path to a leaf"
                )
            return LEAF
        if assignment[variable] != value:
            return LEAF
        shared = fragment_variables & set(assignment)
        if shared:
            raise OverlappingVariablesError(
                f"The subtree resolves {', '.join(sorted(shared))},"
                " already resolved on the path"
            )
        return spec.subtree

    grafted = ProbabilityTree(
        root=map_leaves(tree.root, _replace),
        domains=_merge_domains(tree.domains, fragment.domains),
    )
    violations = validate(grafted)
    if violations:
        raise TreeValidationError(violations, f"Grafting made an invalid tree: {violations[0]}")
    _LOGGER.debug("Grafted %s under %s=%s", ",".join(fragment.domains), variable, value)
    return grafted


def graft(tree: ProbabilityTree, specs: Sequence[GraftSpec]) -> ProbabilityTree:
    """Appends each spec's subtree below the leaves its selector matches.
    Specs are applied in order. Probabilities of events over the variables
    already in ``tree`` are unchanged.

    :param tree: The tree to extend
    :param specs: The grafts
    """
    return reduce(_graft_one, specs, tree)


def _probability(name: str, value: ProbabilityLike) -> Fraction:
    probability = Fraction(value)
    if not ZERO <= probability <= ONE:
        raise InvalidDistributionError(f"{name} must be in [0, 1], not {probability}")
    return probability


@dataclass(frozen=True)
class PairMechanism:
    """A cause-then-effect pair of binary mechanisms.

    :param cause: The probability that the cause takes its first value
    :param agreement: The probability that the effect takes the value
        matching the cause
    """

    cause: Fraction = Fraction(1, 2)
    agreement: Fraction = Fraction(3, 4)

    def __post_init__(self) -> None:
        object.__setattr__(self, "cause", _probability("cause", self.cause))
        object.__setattr__(self, "agreement", _probability("agreement", self.agreement))

    def subtree(
        self,
        cause: Tuple[str, Tuple[str, str]],
        effect: Tuple[str, Tuple[str, str]],
    ) -> Node:
        """The cause mechanism followed, on each branch, by the effect mechanism.

        :param cause: The cause variable and its two values
        :param effect: The effect variable and its two values (the first
            value "agrees" with the cause's first value)
        """
        cause_variable, (cause_first, cause_second) = cause
        effect_variable, (effect_first, effect_second) = effect
        disagreement: Fraction = ONE - self.agreement
        return make_node(
            cause_variable,
            [
                (
                    cause_first,
                    self.cause,
                    make_node(
                        effect_variable,
                        [
                            (effect_first, self.agreement, None),
                            (effect_second, disagreement, None),
                        ],
                    ),
                ),
                (
                    cause_second,
                    ONE - self.cause,
                    make_node(
                        effect_variable,
                        [
                            (effect_first, disagreement, None),
                            (effect_second, self.agreement, None),
                        ],
                    ),
                ),
            ],
        )


@dataclass(frozen=True)
class DeviceParams:
    """The mechanisms of the two devices.

    :param prior: P(green causes red)
    :param lights: The light mechanism, used in both directions
    :param spinners_forward: The spinners when the green spinner (U) is the cause
    :param spinners_reverse: The spinners when the red spinner (V) is the cause
    """

    prior: Fraction = Fraction(1, 2)
    lights: PairMechanism = field(default_factory=PairMechanism)
    spinners_forward: PairMechanism = field(default_factory=PairMechanism)
    spinners_reverse: PairMechanism = field(default_factory=PairMechanism)

    def __post_init__(self) -> None:
        object.__setattr__(self, "prior", _probability("prior", self.prior))


_GREEN = (GREEN_LIGHT, GREEN_LIGHT_VALUES)
_RED = (RED_LIGHT, RED_LIGHT_VALUES)
_U = (GREEN_SPINNER, SPINNER_VALUES)
_V = (RED_SPINNER, SPINNER_VALUES)


def build_light_device_tree(params: DeviceParams = DeviceParams()) -> ProbabilityTree:
    """The two-light tree: under ``h`` the green light (X) is resolved first,
    under ``~h`` the red light (Y) is. The default parameters give the
    tree of ``trees/light_device.ptree``.
    """
    return ProbabilityTree(
        root=make_node(
            HYPOTHESIS,
            [
                (GREEN_CAUSES_RED, params.prior, params.lights.subtree(_GREEN, _RED)),
                (RED_CAUSES_GREEN, ONE - params.prior, params.lights.subtree(_RED, _GREEN)),
            ],
        )
    )


def build_two_device_tree(params: DeviceParams = DeviceParams()) -> ProbabilityTree:
    """The constrained two-device tree. Under ``h`` X precedes Y and U
    precedes V, under ``~h`` Y precedes X and V precedes U.
    """
    return graft(
        build_light_device_tree(params),
        [
            GraftSpec(
                (HYPOTHESIS, GREEN_CAUSES_RED),
                params.spinners_forward.subtree(_U, _V),
            ),
            GraftSpec(
                (HYPOTHESIS, RED_CAUSES_GREEN),
                params.spinners_reverse.subtree(_V, _U),
            ),
        ],
    )


def build_unconstrained_device_tree(
    params: DeviceParams = DeviceParams(),
) -> ProbabilityTree:
    """The two-device tree with all four combinations of orderings as
    hypothesis values (see ``UNCONSTRAINED_HYPOTHESES``). The spinner ordering
    is a priori independent of the light ordering and equally likely either way.
    """
    half = Fraction(1, 2)
    lights = {
        "xy": (params.prior, params.lights.subtree(_GREEN, _RED)),
        "yx": (ONE - params.prior, params.lights.subtree(_RED, _GREEN)),
    }
    spinners = {
        "uv": params.spinners_forward.subtree(_U, _V),
        "vu": params.spinners_reverse.subtree(_V, _U),
    }
    branches = []
    for hypothesis in UNCONSTRAINED_HYPOTHESES:
        light_order, spinner_order = hypothesis.split("_")
        prior, light_subtree = lights[light_order]
        spinner_subtree = spinners[spinner_order]
        branches.append(
            (
                hypothesis,
                prior * half,
                map_leaves(light_subtree, lambda _path, s=spinner_subtree: s),  # type: ignore[misc]
            )
        )
    return ProbabilityTree(root=make_node(HYPOTHESIS, branches))


def ordering_probability(
    tree: ProbabilityTree,
    hypothesis: str,
    belief: Posterior,
    first: str,
    second: str,
) -> Fraction:
    """The predictive probability that ``first`` is resolved before ``second``
    (i.e. that ``first`` is the cause), averaging over the hypothesis values
    with the weights of ``belief``.

    :param tree: A tree with ``hypothesis`` at its root
    :param hypothesis: The hypothesis variable
    :param belief: The weights over the hypothesis values
    :param first: The variable expected to be resolved first
    :param second: The variable expected to be resolved second
    """
    assert tree.root.variable == hypothesis
    total: Fraction = ZERO
    for branch in tree.root.branches:
        weight: Fraction = belief[branch.value]
        if weight == ZERO:
            continue
        in_order: Fraction = ZERO
        for path, probability in enumerate_leaves(ProbabilityTree(root=branch.child)):
            order: List[str] = [variable for variable, _ in path]
            if first in order and (
                second not in order or order.index(first) < order.index(second)
            ):
                in_order += probability
        total += weight * in_order
    return total
