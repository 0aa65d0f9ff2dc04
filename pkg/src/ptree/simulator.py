"""Seeded sampling and simulated experiment campaigns.

Random numbers come from numpy's PCG64 bit generator, seeded with a plain
integer (through numpy's ``SeedSequence``), so a seed gives the same stream
on every platform. Each mechanism visited consumes exactly one raw 64-bit
draw ``u``. The branch taken is the first whose cumulative probability ``c``
satisfies ``u < c * 2**64``, compared exactly.
"""

import csv
from dataclasses import dataclass, field
from fractions import Fraction
import io
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ptree.errors import PlanError, ZeroProbabilityError
from ptree.inference import Posterior, TrialRecord, sequential_posterior
from ptree.intervention import InterventionSpec, intervene_many
from ptree.query import condition
from ptree.tree import ZERO, Assignment, Node, ProbabilityTree

# The range of one raw draw
_SCALE: int = 2**64

# Trial log columns (followed by one column per hypothesis value)
_TRIAL_INDEX: str = "trial_index"
_INTERVENTIONS: str = "interventions"
_OBSERVATION: str = "observation"
# Joins the literals of one field
_LITERAL_SEPARATOR: str = ";"

_LOGGER: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Realization:
    """One sampled root-to-leaf path, in resolution order."""

    path: Assignment

    @property
    def assignment(self) -> Dict[str, str]:
        """The path as a variable to value mapping."""
        return dict(self.path)


def _generator(seed: int) -> np.random.PCG64:
    assert seed >= 0
    return np.random.PCG64(seed)


def _choose(node: Node, draw: int) -> int:
    """The index of the branch selected by a raw draw."""
    cumulative: Fraction = ZERO
    chosen: int = -1
    for index, branch in enumerate(node.branches):
        if branch.prob == ZERO:
            continue
        cumulative += branch.prob
        chosen = index
        if draw < cumulative * _SCALE:
            break
    assert chosen >= 0
    return chosen


def _sample_one(tree: ProbabilityTree, bit_generator: np.random.PCG64) -> Realization:
    node: Node = tree.root
    path: List[Tuple[str, str]] = []
    while not node.is_leaf:
        branch = node.branches[_choose(node, int(bit_generator.random_raw()))]
        path.append((str(node.variable), branch.value))
        node = branch.child
    return Realization(path=tuple(path))


def sample(tree: ProbabilityTree, seed: int, n: int) -> List[Realization]:
    """Draws ``n`` independent realizations.

    :param tree: A valid tree
    :param seed: A non-negative integer seed
    :param n: The number of realizations
    """
    assert n >= 0
    bit_generator = _generator(seed)
    return [_sample_one(tree, bit_generator) for _ in range(n)]


def realizations_csv(tree: ProbabilityTree, realizations: Sequence[Realization]) -> str:
    """One column per registered variable (blank where a realization does not
    resolve it), preceded by a comment listing the columns.
    """
    output = io.StringIO()
    output.write(f"# resolution order: {' '.join(tree.variables)}\n")
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(tree.variables)
    for realization in realizations:
        values = realization.assignment
        writer.writerow([values.get(variable, "") for variable in tree.variables])
    return output.getvalue()


@dataclass(frozen=True)
class ExperimentPlan:
    """A simulated campaign.

    :param tree: The single-trial model with the hypothesis at its root
    :param hypothesis: The hypothesis variable
    :param true_value: The hypothesis value that generates the data
    :param interventions: The interventions made in every trial (empty for none)
    :param observe: The variables recorded after each trial
    :param trials: The number of trials
    :param seed: The random seed
    :param prior: The initial belief, otherwise the prior held by the tree's root
    """

    tree: ProbabilityTree
    hypothesis: str
    true_value: str
    interventions: Tuple[InterventionSpec, ...] = ()
    observe: Tuple[str, ...] = ()
    trials: int = 0
    seed: int = 0
    prior: Optional[Posterior] = None

    def __post_init__(self) -> None:
        if self.true_value not in self.tree.domain(self.hypothesis):
            raise PlanError(
                f"'{self.true_value}' is not a value of '{self.hypothesis}'"
            )
        if self.trials < 0:
            raise PlanError(f"trials must not be negative ({self.trials})")
        if self.seed < 0:
            raise PlanError(f"seed must not be negative ({self.seed})")
        for variable in self.observe:
            self.tree.domain(variable)


@dataclass(frozen=True)
class ExperimentResult:
    """The outcome of :py:func:`run_experiment`.

    :param trajectory: The belief before the first trial and after each trial
    :param trials: The trials as they were recorded
    :param log: The replayable trial log (CSV)
    """

    trajectory: List[Posterior]
    trials: List[TrialRecord] = field(default_factory=list)
    log: str = ""


def _join(literals: Sequence[str]) -> str:
    return _LITERAL_SEPARATOR.join(literals)


def _split(text: str) -> List[Tuple[str, str]]:
    pairs: List[Tuple[str, str]] = []
    for literal in filter(None, text.split(_LITERAL_SEPARATOR)):
        variable, _, value = literal.partition("=")
        pairs.append((variable, value))
    return pairs


def trial_log(
    hypothesis: str, trials: Sequence[TrialRecord], trajectory: Sequence[Posterior]
) -> str:
    """Renders a trajectory as CSV. Row 0 holds the prior, row ``t`` the
    trial ``t`` and the belief after it. Weights are ``num/den``.
    """
    assert len(trajectory) == len(trials) + 1
    values: List[str] = list(trajectory[0].weights)
    output = io.StringIO()
    writer = csv.writer(output, lineterminator="\n")
    writer.writerow(
        [_TRIAL_INDEX, _INTERVENTIONS, _OBSERVATION]
        + [f"{hypothesis}={value}" for value in values]
    )
    for index, belief in enumerate(trajectory):
        trial: TrialRecord = trials[index - 1] if index else TrialRecord()
        writer.writerow(
            [
                index,
                _join([str(spec) for spec in trial.interventions]),
                _join([f"{k}={v}" for k, v in trial.observation.items()]),
            ]
            + [
                f"{belief[value].numerator}/{belief[value].denominator}"
                for value in values
            ]
        )
    return output.getvalue()


def read_trial_log(text: str) -> Tuple[str, List[TrialRecord], List[Posterior]]:
    """Parses a trial log written by :py:func:`trial_log`, returning the
    hypothesis variable, the trials and the recorded trajectory.
    """
    rows = list(csv.reader(io.StringIO(text)))
    header: List[str] = rows[0]
    weight_columns: List[Tuple[str, str]] = [
        tuple(column.split("=", 1)) for column in header[3:]  # type: ignore[misc]
    ]
    hypothesis: str = weight_columns[0][0]
    trials: List[TrialRecord] = []
    trajectory: List[Posterior] = []
    for row in rows[1:]:
        if int(row[0]):
            trials.append(
                TrialRecord(
                    interventions=tuple(
                        InterventionSpec(variable, value)
                        for variable, value in _split(row[1])
                    ),
                    observation=dict(_split(row[2])),
                )
            )
        trajectory.append(
            Posterior(
                hypothesis,
                {
                    value: Fraction(weight)
                    for (_, value), weight in zip(weight_columns, row[3:])
                },
            )
        )
    return hypothesis, trials, trajectory


def run_experiment(plan: ExperimentPlan) -> ExperimentResult:
    """Simulates the plan's trials under its true hypothesis value and
    updates the belief after each one.

    Each trial samples one realization of the tree conditioned on the true
    hypothesis value and intervened by the plan's policy, keeps only the
    observed variables, and feeds the result to the sequential update.

    :param plan: The campaign
    """
    generating: ProbabilityTree = intervene_many(
        condition(plan.tree, {plan.hypothesis: plan.true_value}), plan.interventions
    )
    bit_generator = _generator(plan.seed)

    trials: List[TrialRecord] = []
    for _ in range(plan.trials):
        realization: Realization = _sample_one(generating, bit_generator)
        trials.append(
            TrialRecord(
                interventions=plan.interventions,
                observation={
                    variable: value
                    for variable, value in realization.path
                    if variable in plan.observe
                },
            )
        )

    prior: Posterior = plan.prior or Posterior.from_tree(plan.tree, plan.hypothesis)
    try:
        trajectory = sequential_posterior(plan.tree, plan.hypothesis, trials, prior)
    except ZeroProbabilityError:
        _LOGGER.error(
            "A sampled observation is impossible under every hypothesis"
            " (seed=%s true_value=%s)",
            plan.seed,
            plan.true_value,
        )
        raise

    _LOGGER.debug(
        "Ran %d trial(s), final belief %s", plan.trials, trajectory[-1].weights
    )
    return ExperimentResult(
        trajectory=trajectory,
        trials=trials,
        log=trial_log(plan.hypothesis, trials, trajectory),
    )
