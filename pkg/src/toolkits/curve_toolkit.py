import logging
from typing import Any, Dict, List

from src.constants import DEFAULT_OPTIONS
from src.helpers import parse_point
from src.helpers.cubic.curve import (
    ProjPoint,
    coefficient_norm,
    count_points_fp,
    enumerate_rational_points,
    evaluate,
    points_mod_p,
    reduce_point_mod_p,
    reduction_profile,
    smoothness_verdict,
)
from src.helpers.cubic.errors import PointNotOnCurveError
from src.toolkits.base_toolkit import Action, ActionParameter, BaseToolkit, check_int_options
from src.types import ReductionProfile, SmoothnessVerdict

logger = logging.getLogger("toolkits.curve_toolkit")


class CurveToolkit(BaseToolkit):
    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        config = {
            "name": "curve",
            "smoothness_prime_budget": DEFAULT_OPTIONS["SMOOTHNESS_PRIME_BUDGET"],
            "prime_scan_bound": DEFAULT_OPTIONS["PRIME_SCAN_BOUND"],
            "workers": DEFAULT_OPTIONS["WORKERS"],
            **config,
        }
        return check_int_options(config, {"smoothness_prime_budget": 1, "prime_scan_bound": 2, "workers": 1})

    def register_actions(self) -> None:
        actions = [
            Action(
                name="check-smoothness",
                parameters=[],
                description="Certify the curve smooth by a good prime, or singular by a rational singular point",
            ),
            Action(
                name="enumerate-points",
                parameters=[ActionParameter("B", True, int, "Height bound")],
                description="List the rational points of height at most B",
            ),
            Action(
                name="count-points",
                parameters=[ActionParameter("p", True, int, "Prime of good reduction")],
                description="Count the points of the curve over F_p",
            ),
            Action(
                name="list-points-mod-p",
                parameters=[ActionParameter("p", True, int, "Prime")],
                description="List the points of the reduced curve over F_p",
            ),
            Action(
                name="reduce-point",
                parameters=[
                    ActionParameter("point", True, str, "Rational point, e.g. [17:37:21]"),
                    ActionParameter("p", True, int, "Prime"),
                ],
                description="Reduce a rational curve point mod p",
            ),
            Action(
                name="reduction-profile",
                parameters=[ActionParameter("bound", False, int, "Scan primes up to this bound")],
                description="Find the bad primes up to a bound and their product",
            ),
            Action(
                name="coefficient-norm",
                parameters=[],
                description="Largest absolute coefficient of the form",
            ),
        ]
        self.actions = {action.name: action for action in actions}

    def check_smoothness(self) -> SmoothnessVerdict:
        return smoothness_verdict(self._require_curve(), self.config["smoothness_prime_budget"])

    def enumerate_points(self, B: int) -> List[ProjPoint]:
        points = enumerate_rational_points(self._require_curve(), B, self.config["workers"])
        logger.info(f"✅ Found N({B}) = {len(points)} rational points")
        return points

    def count_points(self, p: int) -> int:
        return count_points_fp(self._require_curve(), p)

    def list_points_mod_p(self, p: int) -> List[ProjPoint]:
        return points_mod_p(self._require_curve(), p)

    def reduce_point(self, point: str, p: int) -> ProjPoint:
        form = self._require_curve()
        rational = parse_point(point)
        if evaluate(form, rational) != 0:
            raise PointNotOnCurveError(f"{rational} is not on the curve")
        return reduce_point_mod_p(rational, p)

    def reduction_profile(self, bound: int = None) -> ReductionProfile:
        bound = bound or self.config["prime_scan_bound"]
        profile = reduction_profile(self._require_curve(), bound, self.config["workers"])
        logger.info(f"✅ {len(profile.bad_primes)} bad primes up to {bound}")
        return profile

    def coefficient_norm(self) -> int:
        return coefficient_norm(self._require_curve())
