import logging
from typing import Any, Dict, Optional

from pydantic import ValidationError

from src.constants import DEFAULT_OPTIONS
from src.helpers import parse_point
from src.helpers.cubic.detmethod import MonomialBasis, run_experiment, select_independent_monomials
from src.toolkits.base_toolkit import Action, ActionParameter, BaseToolkit, ToolkitConfigurationError, \
    ToolkitNotReadyError
from src.types import ExperimentConfig, ExperimentReport

logger = logging.getLogger("toolkits.detmethod_toolkit")

# Keys passed through to ExperimentConfig
EXPERIMENT_KEYS = ("A", "u", "q", "prime_limit", "a", "use_chosen_parameters", "max_basis_size", "all_minors",
                   "seed", "search_radius", "seed_count", "pair_cap", "workers")


class DetMethodToolkit(BaseToolkit):
    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        config = {
            "name": "detmethod",
            "A": None,
            "u": DEFAULT_OPTIONS["LEMMA3_U"],
            "q": None,
            "prime_limit": None,
            "a": DEFAULT_OPTIONS["BIDEGREE_A"],
            "use_chosen_parameters": False,
            "max_basis_size": DEFAULT_OPTIONS["MAX_BASIS_SIZE"],
            "all_minors": False,
            "seed": DEFAULT_OPTIONS["SEED"],
            "search_radius": DEFAULT_OPTIONS["SEARCH_RADIUS"],
            "seed_count": DEFAULT_OPTIONS["SEED_COUNT"],
            "pair_cap": DEFAULT_OPTIONS["PAIR_CAP"],
            "workers": DEFAULT_OPTIONS["WORKERS"],
            "origin": None,
            **config,
        }
        try:
            ExperimentConfig(**{key: config[key] for key in EXPERIMENT_KEYS})
        except ValidationError as e:
            raise ToolkitConfigurationError(f"detmethod config is invalid: {e}")
        if config["u"] < 1:
            raise ToolkitConfigurationError("detmethod: u must be at least 1")
        if config["origin"] is not None:
            config["origin"] = str(parse_point(config["origin"]))
        return config

    def register_actions(self) -> None:
        actions = [
            Action(
                name="run-experiment",
                parameters=[
                    ActionParameter("m", True, int, "Descent level m"),
                    ActionParameter("B", True, int, "Height bound"),
                    ActionParameter("R", False, str, "Point R of X_R (default: the fixture base point)"),
                    ActionParameter("A", False, float, "Height exponent A (default: empirical estimate)"),
                    ActionParameter("u", False, float, "Constant u >= 1 of the parameter choice"),
                    ActionParameter("q", False, int, "Sample prime for the basis certificate"),
                    ActionParameter("prime_limit", False, int, "Certify primes up to this limit (default s)"),
                    ActionParameter("a", False, int, "Bidegree a of the monomial basis"),
                    ActionParameter("use_chosen_parameters", False, bool, "Use a from the parameter choice"),
                    ActionParameter("all_minors", False, bool, "Certify every s x s minor when N - s is small"),
                    ActionParameter("seed", False, int, "Seed for the X(F_q) sample order"),
                ],
                description="Run the determinant method pipeline and collect every certificate",
            ),
            Action(
                name="select-basis",
                parameters=[
                    ActionParameter("m", True, int, "Descent level m"),
                    ActionParameter("a", True, int, "Bidegree a"),
                    ActionParameter("b", True, int, "Bidegree b"),
                    ActionParameter("q", False, int, "Sample prime"),
                    ActionParameter("R", False, str, "Point R of X_R (default: the fixture base point)"),
                ],
                description="Certify 3(m^2 a + b) independent monomials over F_q",
            ),
        ]
        self.actions = {action.name: action for action in actions}

    def _origin(self, R: Optional[str]):
        R = R or self.config["origin"]
        if R is None:
            raise ToolkitNotReadyError("No R given and the fixture has no base point")
        return parse_point(R)

    def run_experiment(self, m: int, B: int, R: str = None, **overrides) -> ExperimentReport:
        settings = {key: self.config[key] for key in EXPERIMENT_KEYS}
        settings.update({key: value for key, value in overrides.items() if value is not None})
        report = run_experiment(self._require_curve(), self._origin(R), m, B, ExperimentConfig(**settings))
        for error in report.errors:
            logger.error(f"❌ {error}")
        status = "found" if report.auxiliary_form else "not needed (rank(M) = s)"
        logger.info(f"✅ s = {report.s}, N = {report.pair_count}, rank(M) = {report.matrix_rank}, G {status}")
        return report

    def select_basis(self, m: int, a: int, b: int, q: int = None, R: str = None) -> MonomialBasis:
        return select_independent_monomials(self._require_curve(), self._origin(R), m, a, b,
                                            q or self.config["q"], self.config["seed"])
