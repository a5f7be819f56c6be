import logging
from typing import Any, Dict, List, Optional

from src.constants import DEFAULT_OPTIONS
from src.helpers import parse_point
from src.helpers.cubic.curve import ProjPoint, enumerate_rational_points
from src.helpers.cubic.descent import (
    ClassPartition,
    XPair,
    build_x_points,
    default_seeds,
    estimate_height_exponent,
    pairs_in_height_box,
    partition_classes,
    search_set,
)
from src.helpers.cubic.group import GroupContext, scalar_mul
from src.toolkits.base_toolkit import (
    Action,
    ActionParameter,
    BaseToolkit,
    ToolkitNotReadyError,
    check_int_options,
)
from src.types import HeightExponentEstimate

logger = logging.getLogger("toolkits.descent_toolkit")


class DescentToolkit(BaseToolkit):
    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        config = {
            "name": "descent",
            "search_radius": DEFAULT_OPTIONS["SEARCH_RADIUS"],
            "seed_count": DEFAULT_OPTIONS["SEED_COUNT"],
            "pair_cap": DEFAULT_OPTIONS["PAIR_CAP"],
            "origin": None,
            "rank": None,
            **config,
        }
        if config["origin"] is not None:
            config["origin"] = str(parse_point(config["origin"]))
        if config["rank"] is not None:
            check_int_options(config, {"rank": 0})
        return check_int_options(config, {"search_radius": 0, "seed_count": 1, "pair_cap": 1})

    def register_actions(self) -> None:
        m = ActionParameter("m", True, int, "Descent level m")
        origin = ActionParameter("R", False, str, "Point R of X_R (default: the fixture base point)")
        actions = [
            Action(
                name="partition-classes",
                parameters=[
                    m,
                    ActionParameter("B", True, int, "Height bound of the points to partition"),
                    ActionParameter("rank", False, int, "Mordell-Weil rank, compared against 16 m^r"),
                    ActionParameter("radius", False, int, "Search multiples k*P with |k| <= radius"),
                    origin,
                ],
                description="Split the points of height <= B into m-descent classes (heuristic)",
            ),
            Action(
                name="build-x-points",
                parameters=[
                    m,
                    ActionParameter("B", False, int, "Seed from the points of height <= B"),
                    ActionParameter("generator", False, str, "Seed from the multiples k*G instead"),
                    ActionParameter("cap", False, int, "Maximum number of pairs"),
                    origin,
                ],
                description="Construct pairs (m*Q - (m-1)*R, Q) on X_R from seed points",
            ),
            Action(
                name="estimate-height-exponent",
                parameters=[
                    m,
                    ActionParameter("B", False, int, "Seed from the points of height <= B"),
                    ActionParameter("generator", False, str, "Seed from the multiples k*G instead"),
                    origin,
                ],
                description="Empirical lower estimate of the height exponent A",
            ),
            Action(
                name="pairs-in-height-box",
                parameters=[m, ActionParameter("B", True, int, "Height bound for P"), origin],
                description="X_R pairs with H(P) <= B found by bounded m-division",
            ),
        ]
        self.actions = {action.name: action for action in actions}

    def _origin(self, R: Optional[str]) -> ProjPoint:
        R = R or self.config["origin"]
        if R is None:
            raise ToolkitNotReadyError("No R given and the fixture has no base point")
        return parse_point(R)

    def _seeds(self, ctx: GroupContext, B: Optional[int], generator: Optional[str]) -> List[ProjPoint]:
        if generator:
            G = parse_point(generator)
            return [scalar_mul(ctx, k, G) for k in range(1, self.config["seed_count"] + 1)]
        points = enumerate_rational_points(ctx.form, B or 1)
        return default_seeds(ctx, points, self.config["seed_count"])

    def partition_classes(self, m: int, B: int, rank: int = None, radius: int = None, R: str = None) -> ClassPartition:
        form = self._require_curve()
        ctx = GroupContext(form, self._origin(R))
        points = enumerate_rational_points(form, B)
        radius = self.config["search_radius"] if radius is None else radius
        rank = self.config["rank"] if rank is None else rank
        partition = partition_classes(points, m, ctx, search_set(ctx, points, radius), rank)
        logger.info(f"✅ {len(points)} points in {len(partition.classes)} classes for m = {m}")
        for note in partition.notes:
            logger.warning(f"⚠️ {note}")
        return partition

    def build_x_points(self, m: int, B: int = None, generator: str = None, cap: int = None,
                       R: str = None) -> List[XPair]:
        form = self._require_curve()
        origin = self._origin(R)
        seeds = self._seeds(GroupContext(form, origin), B, generator)
        return build_x_points(form, origin, m, seeds, cap or self.config["pair_cap"])

    def estimate_height_exponent(self, m: int, B: int = None, generator: str = None,
                                 R: str = None) -> HeightExponentEstimate:
        return estimate_height_exponent(self.build_x_points(m, B, generator, None, R))

    def pairs_in_height_box(self, m: int, B: int, R: str = None) -> List[XPair]:
        form = self._require_curve()
        origin = self._origin(R)
        ctx = GroupContext(form, origin)
        points = enumerate_rational_points(form, B)
        candidates = search_set(ctx, points, self.config["search_radius"])
        return pairs_in_height_box(form, origin, m, points, B, candidates)
