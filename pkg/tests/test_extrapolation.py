"""Tests of grafting and the two-device trees."""

from fractions import Fraction
from itertools import product

from hypothesis import assume, given, settings, strategies as st
import pytest

from ptree.errors import (
    InvalidDistributionError,
    OverlappingVariablesError,
    SelectorUnresolvedError,
    TreeValidationError,
    UnknownValueError,
)
from ptree.extrapolation import (
    GREEN_CAUSES_RED,
    GREEN_SPINNER,
    HYPOTHESIS,
    RED_CAUSES_GREEN,
    RED_SPINNER,
    UNCONSTRAINED_HYPOTHESES,
    DeviceParams,
    GraftSpec,
    PairMechanism,
    build_light_device_tree,
    build_two_device_tree,
    build_unconstrained_device_tree,
    graft,
    ordering_probability,
)
from ptree.inference import Posterior, TrialRecord, posterior, sequential_posterior
from ptree.intervention import InterventionSpec
from ptree.tree import ONE, ProbabilityTree, count_leaves, event_probability, make_node, validate

from .conftest import events, probability_trees

SPINNER = make_node("W", [("w", "1/3", None), ("~w", "2/3", None)])
GREEN_ON_RED_SEEN = TrialRecord(
    interventions=(InterventionSpec("X", "x"),), observation={"Y": "y"}
)


def test_light_device_builder(light_tree):
    assert build_light_device_tree() == light_tree


def test_two_device_tree():
    tree = build_two_device_tree()
    assert validate(tree) == []
    assert count_leaves(tree.root) == 32
    assert tree.variables == ("H", "X", "Y", "U", "V")
    assert tree.domain("U") == ("horizontal", "vertical")


def test_two_device_tree_keeps_the_lights(light_tree):
    tree = build_two_device_tree()
    for values in product(("h", "~h"), ("x", "~x"), ("y", "~y")):
        event = dict(zip(("H", "X", "Y"), values))
        assert event_probability(tree, event) == event_probability(light_tree, event)


def test_two_device_orderings():
    tree = build_two_device_tree()
    prior = Posterior.from_tree(tree, HYPOTHESIS)
    assert ordering_probability(tree, HYPOTHESIS, prior, GREEN_SPINNER, RED_SPINNER) == (
        Fraction(1, 2)
    )
    belief = Posterior(
        HYPOTHESIS, {GREEN_CAUSES_RED: Fraction(9, 13), RED_CAUSES_GREEN: Fraction(4, 13)}
    )
    assert ordering_probability(tree, HYPOTHESIS, belief, GREEN_SPINNER, RED_SPINNER) == (
        Fraction(9, 13)
    )
    assert ordering_probability(tree, HYPOTHESIS, belief, RED_SPINNER, GREEN_SPINNER) == (
        Fraction(4, 13)
    )


DETERMINISTIC = PairMechanism(cause=ONE, agreement=ONE)
SKEWED = PairMechanism(cause=Fraction(1, 5), agreement=Fraction(2, 3))


@pytest.mark.parametrize(
    "params,horizontal",
    [
        (DeviceParams(), Fraction(1, 2)),
        (
            DeviceParams(
                spinners_forward=DETERMINISTIC, spinners_reverse=DETERMINISTIC
            ),
            ONE,
        ),
        (DeviceParams(spinners_forward=SKEWED), Fraction(9, 20)),
        (
            DeviceParams(spinners_forward=SKEWED, spinners_reverse=SKEWED),
            Fraction(3, 10),
        ),
    ],
)
def test_spinners_do_not_change_the_light_posterior(params, horizontal):
    tree = build_two_device_tree(params)
    assert validate(tree) == []
    assert event_probability(tree, {RED_SPINNER: "horizontal"}) == horizontal
    belief = posterior(tree, HYPOTHESIS, GREEN_ON_RED_SEEN)
    assert belief.weights == {
        GREEN_CAUSES_RED: Fraction(3, 5),
        RED_CAUSES_GREEN: Fraction(2, 5),
    }


def test_evidence_on_the_lights_transfers_to_the_spinners():
    tree = build_two_device_tree()
    trajectory = sequential_posterior(
        tree,
        HYPOTHESIS,
        [GREEN_ON_RED_SEEN] * 2,
        Posterior.from_tree(tree, HYPOTHESIS),
    )
    assert ordering_probability(
        tree, HYPOTHESIS, trajectory[-1], GREEN_SPINNER, RED_SPINNER
    ) == Fraction(9, 13)


def test_unconstrained_tree():
    tree = build_unconstrained_device_tree()
    assert validate(tree) == []
    assert tree.domain(HYPOTHESIS) == UNCONSTRAINED_HYPOTHESES
    assert tree.root.distribution() == {
        value: Fraction(1, 4) for value in UNCONSTRAINED_HYPOTHESES
    }


def test_unconstrained_spinners_do_not_learn():
    tree = build_unconstrained_device_tree()
    trajectory = sequential_posterior(
        tree,
        HYPOTHESIS,
        [GREEN_ON_RED_SEEN] * 3,
        Posterior.from_tree(tree, HYPOTHESIS),
    )
    # The lights are learned...
    assert trajectory[-1]["xy_uv"] + trajectory[-1]["xy_vu"] > Fraction(1, 2)
    # ...but not the spinners
    for belief in trajectory:
        assert ordering_probability(
            tree, HYPOTHESIS, belief, GREEN_SPINNER, RED_SPINNER
        ) == Fraction(1, 2)


def test_device_params():
    params = DeviceParams(
        prior=Fraction(1, 4),
        lights=PairMechanism(cause=Fraction(1, 3), agreement=Fraction(9, 10)),
    )
    tree = build_light_device_tree(params)
    assert validate(tree) == []
    assert event_probability(tree, {"H": "h"}) == Fraction(1, 4)
    assert event_probability(tree, {"H": "h", "X": "x", "Y": "y"}) == Fraction(3, 40)


def test_invalid_parameters():
    with pytest.raises(InvalidDistributionError):
        PairMechanism(agreement=Fraction(3, 2))
    with pytest.raises(InvalidDistributionError):
        DeviceParams(prior=Fraction(-1, 2))


def test_graft_below_one_hypothesis(light_tree):
    tree = graft(light_tree, [GraftSpec(("H", "h"), SPINNER)])
    assert validate(tree) == []
    assert event_probability(tree, {"W": "w"}) == Fraction(1, 6)
    assert event_probability(tree, {"H": "h", "W": "w"}) == Fraction(1, 6)
    # The input is untouched
    assert not light_tree.resolves("W")


def test_graft_under_a_deep_selector(light_tree):
    tree = graft(light_tree, [GraftSpec(("Y", "~y"), SPINNER)])
    assert event_probability(tree, {"W": "~w"}) == Fraction(1, 3)


def test_graft_specs_apply_in_order(light_tree):
    other = make_node("Z", [("z", 1, None), ("~z", 0, None)])
    tree = graft(
        light_tree,
        [
            GraftSpec(("H", "h"), SPINNER),
            GraftSpec(("H", "~h"), SPINNER),
            GraftSpec(("W", "w"), other),
        ],
    )
    assert event_probability(tree, {"Z": "z"}) == Fraction(1, 3)
    with pytest.raises(SelectorUnresolvedError):
        graft(light_tree, [GraftSpec(("H", "h"), SPINNER), GraftSpec(("W", "w"), other)])


def test_graft_unresolved_selector():
    tree = ProbabilityTree(
        root=make_node(
            "A",
            [
                ("a", "1/2", make_node("B", [("b", "1/2", None), ("~b", "1/2", None)])),
                ("~a", "1/2", None),
            ],
        )
    )
    with pytest.raises(SelectorUnresolvedError):
        graft(tree, [GraftSpec(("B", "b"), SPINNER)])


def test_graft_unresolved_selector_on_impossible_path():
    tree = ProbabilityTree(
        root=make_node(
            "A",
            [
                ("a", 1, make_node("B", [("b", "1/2", None), ("~b", "1/2", None)])),
                ("~a", 0, None),
            ],
        )
    )
    grafted = graft(tree, [GraftSpec(("B", "b"), SPINNER)])
    assert event_probability(grafted, {"W": "w"}) == Fraction(1, 6)


def test_graft_overlapping_variables(light_tree):
    with pytest.raises(OverlappingVariablesError):
        graft(
            light_tree,
            [GraftSpec(("H", "h"), make_node("X", [("x", 1, None), ("~x", 0, None)]))],
        )


def test_graft_invalid_subtree(light_tree):
    with pytest.raises(TreeValidationError):
        graft(
            light_tree,
            [GraftSpec(("H", "h"), make_node("W", [("w", "1/2", None), ("~w", "1/4", None)]))],
        )


def test_graft_unknown_selector_value(light_tree):
    with pytest.raises(UnknownValueError):
        graft(light_tree, [GraftSpec(("H", "maybe"), SPINNER)])


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_graft_keeps_existing_marginals(data):
    tree = data.draw(probability_trees())
    assume(not tree.root.is_leaf)
    selector = (str(tree.root.variable), tree.root.branches[0].value)
    grafted = graft(tree, [GraftSpec(selector, SPINNER)])
    assert validate(grafted) == []

    event = data.draw(events(tree))
    assert event_probability(grafted, event) == event_probability(tree, event)
    assert event_probability(grafted, {"W": "w"}) == Fraction(1, 3) * event_probability(
        tree, dict([selector])
    )
    assert event_probability(grafted, {}) == ONE
