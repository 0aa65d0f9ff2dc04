#!/usr/bin/env python
"""Runs the same interventional campaign on two models of the connected
light and spinner devices, and reports what each has learned about the
spinners.

In the constrained model one hypothesis decides both orderings: either
"green causes red" for the lights *and* the spinners, or "red causes green"
for both. In the unconstrained model the two orderings are independent
hypotheses (four values in all).

Every trial turns the green light on (X=x) and records the red light (Y).
Neither spinner is ever observed. The constrained model nevertheless
becomes confident that the green spinner (U) drives the red one (V),
while the unconstrained model's belief about the spinners never moves.

To run 200 trials with seed 42: -

    ./constraint_contrast.py --trials 200 --seed 42

"""
import argparse
from fractions import Fraction
from typing import Tuple

from ptree.extrapolation import (
    GREEN_CAUSES_RED,
    GREEN_SPINNER,
    HYPOTHESIS,
    RED_SPINNER,
    UNCONSTRAINED_HYPOTHESES,
    DeviceParams,
    build_two_device_tree,
    build_unconstrained_device_tree,
    ordering_probability,
)
from ptree.inference import format_decimal
from ptree.intervention import InterventionSpec
from ptree.simulator import ExperimentPlan, ExperimentResult, run_experiment
from ptree.tree import ProbabilityTree


def campaign(
    tree: ProbabilityTree, *, true_value: str, trials: int, seed: int
) -> Tuple[Fraction, Fraction]:
    """Runs the do(X=x), observe Y campaign on a two-device tree, returning
    the prior and final predictive probability that U drives V.
    """
    result: ExperimentResult = run_experiment(
        ExperimentPlan(
            tree=tree,
            hypothesis=HYPOTHESIS,
            true_value=true_value,
            interventions=(InterventionSpec("X", "x"),),
            observe=("Y",),
            trials=trials,
            seed=seed,
        )
    )
    before: Fraction = ordering_probability(
        tree, HYPOTHESIS, result.trajectory[0], GREEN_SPINNER, RED_SPINNER
    )
    after: Fraction = ordering_probability(
        tree, HYPOTHESIS, result.trajectory[-1], GREEN_SPINNER, RED_SPINNER
    )
    return before, after


def run(
    *, trials: int, seed: int, params: DeviceParams = DeviceParams()
) -> Tuple[Fraction, Fraction]:
    """Runs the campaign on both models, printing and returning the final
    probability that U drives V (constrained, unconstrained).
    """
    constrained_before, constrained = campaign(
        build_two_device_tree(params),
        true_value=GREEN_CAUSES_RED,
        trials=trials,
        seed=seed,
    )
    unconstrained_before, unconstrained = campaign(
        build_unconstrained_device_tree(params),
        true_value=UNCONSTRAINED_HYPOTHESES[0],
        trials=trials,
        seed=seed,
    )

    print(f"Trials: {trials} (seed {seed})")
    print(
        f" Constrained   P(U drives V) {constrained_before} -> "
        f"{format_decimal(constrained)}"
    )
    print(
        f" Unconstrained P(U drives V) {unconstrained_before} -> "
        f"{format_decimal(unconstrained)}"
    )
    return constrained, unconstrained


if __name__ == "__main__":

    # Setup a command-line parser
    # and parse command line arguments
    parser = argparse.ArgumentParser(
        prog="constraint_contrast",
        description="Demonstrates that evidence about the lights only transfers"
        " to the spinners when one hypothesis governs both devices.",
    )
    parser.add_argument(
        "--trials", type=int, default=200, help="The number of trials to run"
    )
    parser.add_argument("--seed", type=int, default=42, help="The random seed")
    args: argparse.Namespace = parser.parse_args()

    if args.trials < 0:
        parser.error("--trials must not be negative")

    run(trials=args.trials, seed=args.seed)
