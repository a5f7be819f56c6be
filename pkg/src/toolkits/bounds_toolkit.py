import logging
from typing import Any, Dict, List

from src.constants import DEFAULT_OPTIONS
from src.helpers.cubic import bounds
from src.helpers.cubic.curve import enumerate_rational_points
from src.toolkits.base_toolkit import Action, ActionParameter, BaseToolkit, ToolkitConfigurationError, \
    check_int_options
from src.types import (
    ComparisonBounds,
    GrowthRow,
    Lemma8Check,
    Lemma8Sweep,
    MertensDiagnostics,
    ParameterChoice,
    ReductionDiagnostics,
    Theorem1Bound,
    Theorem9Report,
)

logger = logging.getLogger("toolkits.bounds_toolkit")


class BoundsToolkit(BaseToolkit):
    @property
    def needs_curve(self) -> bool:
        return False

    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        config = {
            "name": "bounds",
            "precision": DEFAULT_OPTIONS["PRECISION_DPS"],
            "prime_scan_bound": DEFAULT_OPTIONS["PRIME_SCAN_BOUND"],
            "rank": None,
            **config,
        }
        if config["rank"] is not None:
            check_int_options(config, {"rank": 0})
        return check_int_options(config, {"precision": 15, "prime_scan_bound": 2})

    def register_actions(self) -> None:
        B = ActionParameter("B", True, int, "Height bound B >= 3")
        rank = ActionParameter("r", False, int, "Mordell-Weil rank (default: the fixture rank)")
        actions = [
            Action(
                name="theorem1",
                parameters=[B, rank, ActionParameter("m", False, int, "Descent level (default: optimal m)")],
                description="m^r (B^(2/(3m^2)) + m^2) log B",
            ),
            Action(name="optimal-m", parameters=[B], description="1 + floor(sqrt(log B))"),
            Action(
                name="parameter-choice",
                parameters=[
                    B,
                    ActionParameter("m", True, int, "Descent level m"),
                    ActionParameter("A", True, float, "Height exponent A"),
                    ActionParameter("u", False, float, "Constant u >= 1"),
                ],
                description="Choose b = m^2, a and s, and evaluate inequality (8)",
            ),
            Action(
                name="mertens",
                parameters=[ActionParameter("s", True, int, "Prime range s >= 2")],
                description="Prime sums against log s",
            ),
            Action(
                name="lemma8",
                parameters=[ActionParameter("pi", True, int, "Integer > 1")],
                description="sum of log p / p over p | pi against log log pi + 2",
            ),
            Action(
                name="lemma8-sweep",
                parameters=[ActionParameter("limit", True, int, "Check every square-free integer up to this")],
                description="Exhaustive Lemma 8 check",
            ),
            Action(
                name="theorem9",
                parameters=[ActionParameter("r", True, int, "Rank r >= 1")],
                description="Exact log B exponent for rank r",
            ),
            Action(
                name="diagnostics",
                parameters=[
                    B,
                    ActionParameter("N", False, int, "Observed N(B) (default: enumerate)"),
                    ActionParameter("bound", False, int, "Bad-prime scan bound"),
                ],
                description="Coefficient-size and bad-prime ratios for the loaded curve",
            ),
            Action(
                name="comparison",
                parameters=[B, rank, ActionParameter("m", False, int, "Descent level (default: optimal m)")],
                description="Theorem 1 next to the earlier uniform estimate",
            ),
            Action(
                name="growth",
                parameters=[ActionParameter("grid", True, str, "Comma-separated list of B values"), rank],
                description="N(B) and the bounds over a grid of B",
            ),
        ]
        self.actions = {action.name: action for action in actions}

    def _rank(self, r) -> int:
        r = self.config["rank"] if r is None else r
        if r is None:
            raise ToolkitConfigurationError("No rank given and the fixture supplies none")
        return r

    def theorem1(self, B: int, r: int = None, m: int = None) -> Theorem1Bound:
        precision = self.config["precision"]
        return bounds.theorem1_bound(B, self._rank(r), m or bounds.optimal_m(B, precision), precision)

    def optimal_m(self, B: int) -> int:
        return bounds.optimal_m(B, self.config["precision"])

    def parameter_choice(self, B: int, m: int, A: float, u: float = None) -> ParameterChoice:
        return bounds.parameter_choice(B, m, A, u or 1, self.config["precision"])

    def mertens(self, s: int) -> MertensDiagnostics:
        return bounds.mertens_diagnostics(s, self.config["precision"])

    def lemma8(self, pi: int) -> Lemma8Check:
        return bounds.lemma8_check(pi, self.config["precision"])

    def lemma8_sweep(self, limit: int) -> Lemma8Sweep:
        sweep = bounds.lemma8_sweep(limit)
        logger.info(f"{'✅' if not sweep.failures else '❌'} {sweep.checked} square-free values checked")
        return sweep

    def theorem9(self, r: int) -> Theorem9Report:
        return bounds.theorem9_exponent(r)

    def diagnostics(self, B: int, N: int = None, bound: int = None) -> ReductionDiagnostics:
        form = self._require_curve()
        if N is None:
            N = len(enumerate_rational_points(form, B))
        return bounds.reduction_diagnostics(form, B, N, scan_bound=bound or self.config["prime_scan_bound"],
                                            precision=self.config["precision"])

    def comparison(self, B: int, r: int = None, m: int = None) -> ComparisonBounds:
        precision = self.config["precision"]
        return bounds.comparison_bounds(B, self._rank(r), m or bounds.optimal_m(B, precision), precision)

    def growth(self, grid: str, r: int = None) -> List[GrowthRow]:
        try:
            values = [int(value) for value in grid.split(",") if value.strip()]
        except ValueError:
            raise ToolkitConfigurationError(f"B grid must be comma-separated integers, got {grid!r}")
        return bounds.growth_table(self._require_curve(), values, self._rank(r), precision=self.config["precision"])
