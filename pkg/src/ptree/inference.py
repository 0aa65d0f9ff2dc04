"""Posteriors over a hypothesis variable.

The hypothesis is an ordinary variable of the tree, resolved before any
variable that is observed or intervened. A single trial is handled by
intervening and then conditioning. A sequence of independent trials is
handled by multiplying per-trial likelihoods into the prior, and the result
can be checked against a brute-force tree that replicates the experiment
once per trial.
"""

from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
import logging
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Set, Tuple

from ptree.errors import (
    HypothesisOrderError,
    InvalidDistributionError,
    OverlappingVariablesError,
    SizeGuardError,
    ZeroProbabilityError,
)
from ptree.intervention import InterventionSpec, intervene_many
from ptree.query import ConditionalQuery, condition, conditional_probability
from ptree.tree import (
    LEAF,
    ONE,
    ZERO,
    Branch,
    Event,
    Node,
    ProbabilityTree,
    check_event,
    count_leaves,
    event_probability,
    map_leaves,
)

MAX_REPLICATED_LEAVES: int = 1_000_000
"""The default limit on the number of leaves of a replicated tree."""

# Separates a variable name from its trial number in a replicated tree
_TRIAL_SEPARATOR: str = "#"

_LOGGER: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Posterior:
    """A distribution over the values of the hypothesis variable.

    :param hypothesis: The hypothesis variable
    :param weights: The probability of each value (they sum to one)
    """

    hypothesis: str
    weights: Dict[str, Fraction]

    def __post_init__(self) -> None:
        weights = {value: Fraction(weight) for value, weight in self.weights.items()}
        if any(weight < ZERO for weight in weights.values()):
            raise InvalidDistributionError(
                f"Negative weight in posterior over '{self.hypothesis}'"
            )
        if sum(weights.values(), ZERO) != ONE:
            raise InvalidDistributionError(
                f"Posterior over '{self.hypothesis}' sums to"
                f" {sum(weights.values(), ZERO)}, not 1"
            )
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, hypothesis: str, values: Sequence[str]) -> "Posterior":
        """Equal weight on every value."""
        assert values
        return cls(hypothesis, {value: Fraction(1, len(values)) for value in values})

    @classmethod
    def from_tree(cls, tree: ProbabilityTree, hypothesis: str) -> "Posterior":
        """The prior held by the root mechanism of ``tree``, which must resolve
        ``hypothesis``.
        """
        _require_root(tree, hypothesis)
        return cls(hypothesis, tree.root.distribution())

    def __getitem__(self, value: str) -> Fraction:
        return self.weights[value]

    def as_text(self) -> str:
        """One ``value weight (decimal)`` line per hypothesis value."""
        return "\n".join(
            f"{value} {weight} ({format_decimal(weight)})"
            for value, weight in self.weights.items()
        )


@dataclass(frozen=True)
class TrialRecord:
    """One experimental round: the interventions made and what was then seen.

    :param interventions: The variables forced before observing
    :param observation: The observed (partial) assignment
    """

    interventions: Tuple[InterventionSpec, ...] = ()
    observation: Dict[str, str] = field(default_factory=dict)

    def key(self) -> Tuple[Tuple[InterventionSpec, ...], FrozenSet[Tuple[str, str]]]:
        """A hashable identity (trials with equal keys have equal likelihoods)."""
        return (
            tuple(sorted(self.interventions, key=lambda spec: spec.variable)),
            frozenset(self.observation.items()),
        )


def format_decimal(value: Fraction) -> str:
    """A display-only decimal rendering of an exact value, e.g. ``0.375``."""
    if value == ZERO:
        return "0.0"
    if value == ONE:
        return "1.0"
    return format(
        (Decimal(value.numerator) / Decimal(value.denominator)).normalize(), "f"
    )


def _require_root(tree: ProbabilityTree, hypothesis: str) -> None:
    tree.domain(hypothesis)
    if tree.root.variable != hypothesis:
        raise HypothesisOrderError(
            f"The root resolves '{tree.root.variable}', not the hypothesis"
            f" '{hypothesis}'"
        )


def _check_trial(hypothesis: str, trial: TrialRecord) -> None:
    forced: Set[str] = {spec.variable for spec in trial.interventions}
    if hypothesis in forced or hypothesis in trial.observation:
        raise OverlappingVariablesError(
            f"The hypothesis '{hypothesis}' cannot be observed or intervened"
        )
    shared: Set[str] = forced & set(trial.observation)
    if shared:
        raise OverlappingVariablesError(
            f"{', '.join(sorted(shared))} both intervened and observed"
        )


def _check_hypothesis_first(
    tree: ProbabilityTree, hypothesis: str, evidence: Set[str]
) -> None:
    """Raises unless every path resolves ``hypothesis`` before any of
    the ``evidence`` variables.
    """

    def _walk(node: Node) -> None:
        if node.is_leaf:
            raise HypothesisOrderError(
                f"A path ends without resolving the hypothesis '{hypothesis}'"
            )
        if node.variable == hypothesis:
            return
        if node.variable in evidence:
            raise HypothesisOrderError(
                f"'{node.variable}' is resolved before the hypothesis '{hypothesis}'"
            )
        for branch in node.branches:
            _walk(branch.child)

    tree.domain(hypothesis)
    _walk(tree.root)


def posterior(
    tree: ProbabilityTree, hypothesis: str, trial: TrialRecord
) -> Posterior:
    """Returns P(hypothesis | do(interventions), observation) for a single trial.

    :param tree: The model, with the hypothesis resolved before the evidence
    :param hypothesis: The hypothesis variable
    :param trial: The interventions and the observation
    """
    _check_trial(hypothesis, trial)
    _check_hypothesis_first(
        tree,
        hypothesis,
        set(trial.observation) | {spec.variable for spec in trial.interventions},
    )
    intervened: ProbabilityTree = intervene_many(tree, trial.interventions)
    check_event(intervened, trial.observation)
    if event_probability(intervened, trial.observation) == ZERO:
        raise ZeroProbabilityError(
            "The observation has probability 0 under the interventions"
        )
    return Posterior(
        hypothesis,
        {
            value: conditional_probability(
                intervened,
                ConditionalQuery(
                    target={hypothesis: value}, given=dict(trial.observation)
                ),
            )
            for value in intervened.domain(hypothesis)
        },
    )


def _with_uniform_root(tree: ProbabilityTree) -> ProbabilityTree:
    """The same tree with an equal-weight root, so every root value can be
    conditioned on."""
    root: Node = tree.root
    share: Fraction = Fraction(1, len(root.branches))
    return ProbabilityTree(
        root=Node(
            variable=root.variable,
            branches=tuple(
                Branch(value=branch.value, prob=share, child=branch.child)
                for branch in root.branches
            ),
        ),
        domains=tree.domains,
    )


def likelihood(
    template: ProbabilityTree,
    hypothesis: str,
    value: str,
    interventions: Sequence[InterventionSpec],
    observation: Event,
) -> Fraction:
    """P(observation | hypothesis=value, do(interventions)), computed by
    conditioning the template on the hypothesis value, then intervening,
    then evaluating the observation.

    The template's own prior over the hypothesis does not matter.
    """
    _require_root(template, hypothesis)
    conditioned: ProbabilityTree = condition(
        _with_uniform_root(template), {hypothesis: value}
    )
    return event_probability(intervene_many(conditioned, interventions), observation)


def sequential_posterior(
    template: ProbabilityTree,
    hypothesis: str,
    trials: Sequence[TrialRecord],
    prior: Posterior,
) -> List[Posterior]:
    """Updates ``prior`` with independent trials, returning the trajectory.
    Entry 0 is the prior, entry ``t`` the posterior after ``t`` trials.

    :param template: The single-trial model, the hypothesis at its root
    :param hypothesis: The hypothesis variable
    :param trials: The trials, in order
    :param prior: The belief before the first trial
    """
    _require_root(template, hypothesis)
    if prior.hypothesis != hypothesis or set(prior.weights) != set(
        template.domain(hypothesis)
    ):
        raise InvalidDistributionError(
            f"The prior does not cover the values of '{hypothesis}'"
        )

    cache: Dict[Tuple[object, str], Fraction] = {}
    trajectory: List[Posterior] = [prior]
    current: Posterior = prior
    for index, trial in enumerate(trials, start=1):
        _check_trial(hypothesis, trial)
        unnormalised: Dict[str, Fraction] = {}
        for value, weight in current.weights.items():
            if weight == ZERO:
                unnormalised[value] = ZERO
                continue
            cache_key = (trial.key(), value)
            if cache_key not in cache:
                cache[cache_key] = likelihood(
                    template,
                    hypothesis,
                    value,
                    trial.interventions,
                    trial.observation,
                )
            unnormalised[value] = weight * cache[cache_key]
        total: Fraction = sum(unnormalised.values(), ZERO)
        if total == ZERO:
            raise ZeroProbabilityError(
                f"Trial {index} has probability 0 under every hypothesis"
            )
        current = Posterior(
            hypothesis,
            {value: weight / total for value, weight in unnormalised.items()},
        )
        trajectory.append(current)

    _LOGGER.debug("Updated '%s' with %d trial(s)", hypothesis, len(trials))
    return trajectory


def trial_variable(variable: str, trial_number: int) -> str:
    """The name of ``variable`` in copy ``trial_number`` (1-based) of a
    replicated tree."""
    return f"{variable}{_TRIAL_SEPARATOR}{trial_number}"


def _rename(node: Node, trial_number: int) -> Node:
    if node.is_leaf:
        return node
    return Node(
        variable=trial_variable(str(node.variable), trial_number),
        branches=tuple(
            Branch(
                value=branch.value,
                prob=branch.prob,
                child=_rename(branch.child, trial_number),
            )
            for branch in node.branches
        ),
    )


def _replicate(subtree: Node, copies: int) -> Node:
    """``copies`` renamed copies of ``subtree``, each grafted at every leaf
    of the one before."""
    chained: Node = LEAF
    for trial_number in range(copies, 0, -1):
        tail: Node = chained
        chained = map_leaves(_rename(subtree, trial_number), lambda _path, tail=tail: tail)  # type: ignore[misc]
    return chained


def replicated_tree_posterior(
    template: ProbabilityTree,
    hypothesis: str,
    trials: Sequence[TrialRecord],
    prior: Optional[Posterior] = None,
    *,
    max_leaves: int = MAX_REPLICATED_LEAVES,
) -> Posterior:
    """The brute-force posterior. One tree is built with the hypothesis at the
    root and, below each hypothesis value, one renamed copy of that value's
    subtree per trial. All (renamed) interventions are applied and the
    conjunction of all (renamed) observations is conditioned on.

    :param template: The single-trial model, the hypothesis at its root
    :param hypothesis: The hypothesis variable
    :param trials: The trials
    :param prior: The prior, uniform if not given
    :param max_leaves: The largest replicated tree that will be built
    """
    _require_root(template, hypothesis)
    prior = prior or Posterior.uniform(hypothesis, template.domain(hypothesis))

    subtrees: Mapping[str, Node] = {
        branch.value: branch.child for branch in template.root.branches
    }
    leaves: int = sum(count_leaves(node) ** len(trials) for node in subtrees.values())
    if leaves > max_leaves:
        raise SizeGuardError(
            f"A replicated tree of {len(trials)} trial(s) has {leaves} leaves"
            f" (limit {max_leaves})"
        )

    specs: List[InterventionSpec] = []
    observation: Dict[str, str] = {}
    for trial_number, trial in enumerate(trials, start=1):
        _check_trial(hypothesis, trial)
        specs.extend(
            InterventionSpec(trial_variable(spec.variable, trial_number), spec.value)
            for spec in trial.interventions
        )
        observation.update(
            {
                trial_variable(variable, trial_number): value
                for variable, value in trial.observation.items()
            }
        )

    replicated = ProbabilityTree(
        root=Node(
            variable=hypothesis,
            branches=tuple(
                Branch(
                    value=value,
                    prob=prior[value],
                    child=_replicate(subtrees[value], len(trials)),
                )
                for value in template.domain(hypothesis)
            ),
        )
    )
    _LOGGER.debug("Replicated tree has %d leaves", leaves)
    replicated = intervene_many(replicated, specs)

    evidence: Fraction = event_probability(replicated, observation)
    if evidence == ZERO:
        raise ZeroProbabilityError("The observations have probability 0")
    return Posterior(
        hypothesis,
        {
            value: event_probability(replicated, {hypothesis: value, **observation})
            / evidence
            for value in template.domain(hypothesis)
        },
    )
