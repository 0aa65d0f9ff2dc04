"""Plan module.

Reads an experiment plan file, exposing its values.

A plan is a flat YAML file of ``key: value`` lines that describes a simulated
campaign, for example: -

    ---
    # The tree (relative paths are relative to this file)
    tree: ../trees/light_device.ptree
    hypothesis: H
    # The hypothesis value that generates the data
    true_value: h
    # 'none' or comma-separated VAR=VALUE interventions made in every trial
    policy: X=x
    # Comma-separated variables recorded after each trial
    observe: Y
    trials: 200
    seed: 42
    # Optional, otherwise the prior held by the tree's root
    prior:
      h: 1/2
      ~h: 1/2
"""

from fractions import Fraction
import os
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from yaml import FullLoader, YAMLError, load

from ptree.dsl import parse
from ptree.errors import PlanError
from ptree.inference import Posterior
from ptree.intervention import InterventionSpec
from ptree.literals import parse_interventions
from ptree.simulator import ExperimentPlan

# Required keys
_TREE_KEY: str = "tree"
_HYPOTHESIS_KEY: str = "hypothesis"
_TRUE_VALUE_KEY: str = "true_value"
_TRIALS_KEY: str = "trials"
_SEED_KEY: str = "seed"
# Optional keys
_POLICY_KEY: str = "policy"
_OBSERVE_KEY: str = "observe"
_PRIOR_KEY: str = "prior"

# The policy value that means 'no interventions'
_NO_POLICY: str = "none"


class Plan:
    """Loads the values from an experiment plan file."""

    def __get_config_value(self, key: str, optional: bool = False) -> Optional[Any]:
        """Gets the value of a key. If optional is False we raise
        if a value cannot be found.
        """
        value: Any = self.__config.get(key)
        if not optional and value is None:
            raise PlanError(
                f"{self.__plan_file} could not determine value for '{key}'"
            )
        return value

    def __get_int_value(self, key: str) -> int:
        value: Any = self.__get_config_value(key)
        try:
            return int(str(value))
        except ValueError as ex:
            raise PlanError(
                f"{self.__plan_file} '{key}' must be an integer, not '{value}'"
            ) from ex

    def __init__(self, plan_file: str):
        """Load the plan file, raising PlanError if it cannot be used."""
        self.__plan_file: str = os.path.expandvars(os.path.expanduser(plan_file))
        if not os.path.exists(self.__plan_file):
            raise PlanError(f"{self.__plan_file} does not exist")
        with open(self.__plan_file, encoding="utf8") as config_file:
            try:
                config: Any = load(config_file, Loader=FullLoader)
            except YAMLError as ex:
                problem: str = " ".join(str(ex).split())
                raise PlanError(
                    f"{self.__plan_file} is not valid YAML ({problem})"
                ) from ex
        # Does it look like YAML?
        if not config:
            raise PlanError(f"{self.__plan_file} is empty")
        if not isinstance(config, dict):
            raise PlanError(f"{self.__plan_file} is not formatted correctly")
        self.__config: Dict[str, Any] = config

        # Get the required key values...
        tree_file = Path(str(self.__get_config_value(_TREE_KEY)))
        if not tree_file.is_absolute():
            tree_file = Path(self.__plan_file).parent / tree_file
        self.__tree_file: str = str(tree_file)
        self.__hypothesis: str = str(self.__get_config_value(_HYPOTHESIS_KEY))
        self.__true_value: str = str(self.__get_config_value(_TRUE_VALUE_KEY))
        self.__trials: int = self.__get_int_value(_TRIALS_KEY)
        self.__seed: int = self.__get_int_value(_SEED_KEY)

        # Get the optional key values...
        policy: str = str(self.__get_config_value(_POLICY_KEY, optional=True) or "")
        self.__policy: Tuple[InterventionSpec, ...] = (
            ()
            if policy.strip().lower() in ("", _NO_POLICY)
            else tuple(parse_interventions([policy]))
        )
        observe: str = str(self.__get_config_value(_OBSERVE_KEY, optional=True) or "")
        self.__observe: Tuple[str, ...] = tuple(
            variable.strip() for variable in observe.split(",") if variable.strip()
        )
        prior: Any = self.__get_config_value(_PRIOR_KEY, optional=True)
        if prior is not None and not isinstance(prior, dict):
            raise PlanError(f"{self.__plan_file} '{_PRIOR_KEY}' must be a mapping")
        try:
            self.__prior: Optional[Dict[str, Fraction]] = (
                {str(value): Fraction(str(weight)) for value, weight in prior.items()}
                if prior
                else None
            )
        except (ValueError, ZeroDivisionError) as ex:
            raise PlanError(
                f"{self.__plan_file} '{_PRIOR_KEY}' weights must be rationals"
            ) from ex

    @property
    def plan_file(self) -> str:
        """Return the (expanded) plan file name."""
        return self.__plan_file

    @property
    def tree_file(self) -> str:
        """Return the tree document path, resolved against the plan's directory."""
        return self.__tree_file

    @property
    def hypothesis(self) -> str:
        """Return the hypothesis variable."""
        return self.__hypothesis

    @property
    def true_value(self) -> str:
        """Return the hypothesis value that generates the data."""
        return self.__true_value

    @property
    def policy(self) -> Tuple[InterventionSpec, ...]:
        """Return the interventions made in every trial (empty for none)."""
        return self.__policy

    @property
    def observe(self) -> Tuple[str, ...]:
        """Return the observed variables."""
        return self.__observe

    @property
    def trials(self) -> int:
        """Return the number of trials."""
        return self.__trials

    @property
    def seed(self) -> int:
        """Return the random seed."""
        return self.__seed

    @property
    def prior(self) -> Optional[Dict[str, Fraction]]:
        """Return the prior weights, or None to use the tree's own prior."""
        return self.__prior

    def experiment_plan(self) -> ExperimentPlan:
        """Reads the tree document and returns the runnable plan."""
        if not os.path.exists(self.__tree_file):
            raise PlanError(f"{self.__plan_file} tree {self.__tree_file} does not exist")
        tree = parse(Path(self.__tree_file).read_text(encoding="utf8"))
        return ExperimentPlan(
            tree=tree,
            hypothesis=self.__hypothesis,
            true_value=self.__true_value,
            interventions=self.__policy,
            observe=self.__observe,
            trials=self.__trials,
            seed=self.__seed,
            prior=Posterior(self.__hypothesis, self.__prior) if self.__prior else None,
        )
