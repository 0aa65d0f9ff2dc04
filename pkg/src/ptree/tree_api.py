"""Python utilities that wrap the probability tree engine for callers that
work with documents on disk (like the ``ptree`` command-line tool).

Every public method returns a :py:class:`TreeApiRv`. Engine errors do not
escape: they are logged and returned as a failed value whose ``msg``
contains an ``error`` string.

.. note::
    The size of the brute-force (replicated tree) check made by
    :py:meth:`TreeApi.experiment()` is limited. The limit can be changed
    using :py:meth:`TreeApi.set_leaf_limit()`.
"""

from dataclasses import dataclass
from fractions import Fraction
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

from wrapt import synchronized

from ptree.dsl import export_dot, export_json, parse, parse_document, serialize
from ptree.errors import PtreeError, SizeGuardError, TreeValidationError
from ptree.inference import (
    MAX_REPLICATED_LEAVES,
    Posterior,
    TrialRecord,
    format_decimal,
    posterior,
    replicated_tree_posterior,
    sequential_posterior,
)
from ptree.intervention import intervene_many
from ptree.literals import parse_event, parse_interventions
from ptree.plan import Plan
from ptree.query import ConditionalQuery, conditional_probability
from ptree.simulator import (
    ExperimentResult,
    read_trial_log,
    realizations_csv,
    run_experiment,
    sample,
)
from ptree.tree import ProbabilityTree, event_probability


@dataclass
class TreeApiRv:
    """The return value from the TreeApi class public methods.

    :param success: True if the call was successful, False otherwise.
    :param msg: The call's results, or an ``error`` message if the call failed.
        Successful calls always provide the printable result as ``text``.
    """

    success: bool
    msg: Dict[Any, Any]


# The export formats
_EXPORTERS: Dict[str, Callable[[ProbabilityTree], str]] = {
    "dot": export_dot,
    "json": export_json,
}

_LOGGER: logging.Logger = logging.getLogger(__name__)


def format_rational(value: Fraction) -> str:
    """The exact value followed by a display decimal, e.g. ``3/8 (0.375)``."""
    return f"{value} ({format_decimal(value)})"


class TreeApi:
    """The TreeApi class provides high-level, simplified access to the engine,
    reading trees from ``.ptree`` documents and returning a simplified
    response value ``TreeApiRv``.
    """

    # The largest replicated tree built when verifying an experiment.
    # This can be changed using 'set_leaf_limit()'
    __leaf_limit: int = MAX_REPLICATED_LEAVES

    @classmethod
    def __run(
        cls, operation: Callable[[], Dict[str, Any]], *, error_message: str
    ) -> TreeApiRv:
        """Runs an operation, converting engine and I/O errors
        into a failed return value.

        All the public API methods pass control to this method,
        returning its result to the user.
        """
        try:
            msg: Dict[str, Any] = operation()
        except (PtreeError, OSError, UnicodeDecodeError) as ex:
            _LOGGER.debug("%s (%s)", error_message, ex)
            return TreeApiRv(success=False, msg={"error": f"{error_message}: {ex}"})
        return TreeApiRv(success=True, msg=msg)

    @classmethod
    def __load(cls, tree_file: str) -> ProbabilityTree:
        return parse(Path(tree_file).read_text(encoding="utf8"))

    @classmethod
    def __replays(cls, tree: ProbabilityTree, log: str) -> bool:
        """True if re-running the sequential update over a trial log
        reproduces every belief it records.
        """
        hypothesis, trials, recorded = read_trial_log(log)
        replayed: List[Posterior] = sequential_posterior(
            tree, hypothesis, trials, recorded[0]
        )
        if replayed != recorded:
            _LOGGER.warning("Replaying the trial log gives different beliefs")
            return False
        return True

    @classmethod
    @synchronized
    def set_leaf_limit(cls, limit: int) -> None:
        """Replaces the replicated tree leaf limit.

        :param limit: The maximum number of leaves (at least 1)
        """
        assert limit > 0
        TreeApi.__leaf_limit = limit

    @classmethod
    @synchronized
    def get_leaf_limit(cls) -> int:
        """Return the replicated tree leaf limit."""
        return TreeApi.__leaf_limit

    @classmethod
    @synchronized
    def load_tree(cls, tree_file: str) -> TreeApiRv:
        """Reads and validates a tree document.

        :param tree_file: The ``.ptree`` file
        """
        assert tree_file

        def _load() -> Dict[str, Any]:
            tree: ProbabilityTree = TreeApi.__load(tree_file)
            return {"tree": tree, "text": serialize(tree)}

        return TreeApi.__run(_load, error_message=f"Failed loading {tree_file}")

    @classmethod
    @synchronized
    def validate(cls, tree_file: str) -> TreeApiRv:
        """Validates a tree document. A failed value carries the complete
        list of ``violations`` when the document parsed but broke a rule.

        :param tree_file: The ``.ptree`` file
        """
        assert tree_file

        try:
            parse_document(Path(tree_file).read_text(encoding="utf8"))
        except TreeValidationError as ex:
            return TreeApiRv(
                success=False,
                msg={
                    "error": f"Invalid tree {tree_file}: {ex}",
                    "violations": [str(violation) for violation in ex.violations],
                },
            )
        except (PtreeError, OSError, UnicodeDecodeError) as ex:
            return TreeApiRv(
                success=False, msg={"error": f"Failed reading {tree_file}: {ex}"}
            )
        return TreeApiRv(success=True, msg={"violations": [], "text": "ok"})

    @classmethod
    @synchronized
    def probability(cls, tree_file: str, *, event: str) -> TreeApiRv:
        """The probability of an event.

        :param tree_file: The ``.ptree`` file
        :param event: The event, e.g. ``X=x,Y=y`` (empty for the sure event)
        """
        assert tree_file

        def _probability() -> Dict[str, Any]:
            value: Fraction = event_probability(
                TreeApi.__load(tree_file), parse_event(event)
            )
            return {"probability": value, "text": format_rational(value)}

        return TreeApi.__run(_probability, error_message="Failed computing probability")

    @classmethod
    @synchronized
    def conditional(cls, tree_file: str, *, target: str, given: str) -> TreeApiRv:
        """A conditional probability P(target | given).

        :param tree_file: The ``.ptree`` file
        :param target: The target event
        :param given: The conditioning event
        """
        assert tree_file

        def _conditional() -> Dict[str, Any]:
            value: Fraction = conditional_probability(
                TreeApi.__load(tree_file),
                ConditionalQuery(target=parse_event(target), given=parse_event(given)),
            )
            return {"probability": value, "text": format_rational(value)}

        return TreeApi.__run(
            _conditional, error_message="Failed computing conditional probability"
        )

    @classmethod
    @synchronized
    def intervene(cls, tree_file: str, *, interventions: Sequence[str]) -> TreeApiRv:
        """The tree that results from one or more interventions.

        :param tree_file: The ``.ptree`` file
        :param interventions: ``VAR=VALUE`` literals
        """
        assert tree_file

        def _intervene() -> Dict[str, Any]:
            tree: ProbabilityTree = intervene_many(
                TreeApi.__load(tree_file), parse_interventions(interventions)
            )
            return {"tree": tree, "text": serialize(tree)}

        return TreeApi.__run(_intervene, error_message="Failed intervening")

    @classmethod
    @synchronized
    def posterior(
        cls,
        tree_file: str,
        *,
        hypothesis: str,
        interventions: Sequence[str],
        event: str,
    ) -> TreeApiRv:
        """The posterior over a hypothesis after a single trial.

        :param tree_file: The ``.ptree`` file
        :param hypothesis: The hypothesis variable
        :param interventions: ``VAR=VALUE`` literals
        :param event: The observation
        """
        assert tree_file
        assert hypothesis

        def _posterior() -> Dict[str, Any]:
            belief: Posterior = posterior(
                TreeApi.__load(tree_file),
                hypothesis,
                TrialRecord(
                    interventions=tuple(parse_interventions(interventions)),
                    observation=parse_event(event),
                ),
            )
            return {"posterior": belief, "text": belief.as_text()}

        return TreeApi.__run(_posterior, error_message="Failed computing posterior")

    @classmethod
    @synchronized
    def sample(cls, tree_file: str, *, n: int, seed: int) -> TreeApiRv:
        """Samples realizations, rendered as CSV.

        :param tree_file: The ``.ptree`` file
        :param n: The number of realizations
        :param seed: The random seed
        """
        assert tree_file
        assert n >= 0
        assert seed >= 0

        def _sample() -> Dict[str, Any]:
            tree: ProbabilityTree = TreeApi.__load(tree_file)
            realizations = sample(tree, seed, n)
            return {
                "realizations": realizations,
                "text": realizations_csv(tree, realizations),
            }

        return TreeApi.__run(_sample, error_message="Failed sampling")

    @classmethod
    @synchronized
    def experiment(cls, plan_file: str, *, verify: bool = False) -> TreeApiRv:
        """Runs the experiment described by a plan file, returning the
        trial log as ``text``.

        :param plan_file: The YAML plan
        :param verify: Replay the trial log, checking it reproduces the
            recorded beliefs, and (when it fits the leaf limit) check the
            final belief against the brute-force replicated tree.
            ``replicated`` is True if that tree was built.
        """
        assert plan_file

        def _experiment() -> Dict[str, Any]:
            plan = Plan(plan_file).experiment_plan()
            result: ExperimentResult = run_experiment(plan)
            msg: Dict[str, Any] = {"result": result, "text": result.log}
            if verify:
                msg["verified"] = TreeApi.__replays(plan.tree, result.log)
                msg["replicated"] = False
                try:
                    oracle: Posterior = replicated_tree_posterior(
                        plan.tree,
                        plan.hypothesis,
                        result.trials,
                        result.trajectory[0],
                        max_leaves=TreeApi.__leaf_limit,
                    )
                except SizeGuardError as ex:
                    _LOGGER.warning("Skipping the replicated tree check (%s)", ex)
                    return msg
                msg["replicated"] = True
                if oracle != result.trajectory[-1]:
                    _LOGGER.warning(
                        "Sequential belief %s differs from replicated tree %s",
                        result.trajectory[-1].weights,
                        oracle.weights,
                    )
                    msg["verified"] = False
            return msg

        return TreeApi.__run(_experiment, error_message="Failed running experiment")

    @classmethod
    @synchronized
    def export(cls, tree_file: str, *, fmt: str) -> TreeApiRv:
        """Exports a tree as a graphviz (``dot``) or ``json`` document.

        :param tree_file: The ``.ptree`` file
        :param fmt: ``dot`` or ``json``
        """
        assert tree_file

        if fmt not in _EXPORTERS:
            return TreeApiRv(
                success=False,
                msg={"error": f"Unknown format '{fmt}' (use {', '.join(_EXPORTERS)})"},
            )

        def _export() -> Dict[str, Any]:
            return {"text": _EXPORTERS[fmt](TreeApi.__load(tree_file))}

        return TreeApi.__run(_export, error_message="Failed exporting")

    @classmethod
    def supported_formats(cls) -> List[str]:
        """Return the export format names."""
        return list(_EXPORTERS)
