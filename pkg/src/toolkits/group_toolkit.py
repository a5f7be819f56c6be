import logging
from typing import Any, Dict, Optional

from src.helpers import parse_point
from src.helpers.cubic.curve import ProjPoint
from src.helpers.cubic.group import GroupContext, add, check_divisor_relation, negate, scalar_mul
from src.toolkits.base_toolkit import Action, ActionParameter, BaseToolkit, ToolkitNotReadyError

logger = logging.getLogger("toolkits.group_toolkit")


class GroupToolkit(BaseToolkit):
    def validate_config(self, config: Dict[str, Any]) -> Dict[str, Any]:
        config = {"name": "group", "origin": None, **config}
        if config["origin"] is not None:
            config["origin"] = str(parse_point(config["origin"]))
        return config

    def register_actions(self) -> None:
        origin = ActionParameter("origin", False, str, "Origin O of the group law (default: the fixture base point)")
        field = ActionParameter("p", False, int, "Work over F_p instead of Q")
        actions = [
            Action(
                name="add",
                parameters=[
                    ActionParameter("P", True, str, "First point"),
                    ActionParameter("Q", True, str, "Second point"),
                    origin, field,
                ],
                description="Chord-tangent sum P + Q",
            ),
            Action(
                name="negate",
                parameters=[ActionParameter("P", True, str, "Point"), origin, field],
                description="Inverse of P",
            ),
            Action(
                name="multiply",
                parameters=[
                    ActionParameter("m", True, int, "Integer multiplier"),
                    ActionParameter("P", True, str, "Point"),
                    origin, field,
                ],
                description="m-fold multiple of P",
            ),
            Action(
                name="relation",
                parameters=[
                    ActionParameter("m", True, int, "Positive integer"),
                    ActionParameter("P", True, str, "Point P"),
                    ActionParameter("Q", True, str, "Point Q"),
                    ActionParameter("R", True, str, "Point R"),
                    origin, field,
                ],
                description="Test [P] = m[Q] - (m-1)[R] in the divisor class group",
            ),
        ]
        self.actions = {action.name: action for action in actions}

    def _context(self, origin: Optional[str], p: Optional[int]) -> GroupContext:
        origin = origin or self.config["origin"]
        if origin is None:
            raise ToolkitNotReadyError("No origin given and the fixture has no base point")
        rational = parse_point(origin)
        ctx = GroupContext(self._require_curve(), rational)
        return ctx.reduced(p) if p else ctx

    def add(self, P: str, Q: str, origin: str = None, p: int = None) -> ProjPoint:
        ctx = self._context(origin, p)
        return add(ctx, parse_point(P, p), parse_point(Q, p))

    def negate(self, P: str, origin: str = None, p: int = None) -> ProjPoint:
        ctx = self._context(origin, p)
        return negate(ctx, parse_point(P, p))

    def multiply(self, m: int, P: str, origin: str = None, p: int = None) -> ProjPoint:
        ctx = self._context(origin, p)
        return scalar_mul(ctx, m, parse_point(P, p))

    def relation(self, m: int, P: str, Q: str, R: str, origin: str = None, p: int = None) -> bool:
        form = self._require_curve()
        chosen = origin or self.config["origin"]
        base = parse_point(chosen, p) if chosen else None
        verdict = check_divisor_relation(form, m, parse_point(P, p), parse_point(Q, p), parse_point(R, p), base)
        logger.info(f"{'✅' if verdict else '❌'} [P] = {m}[Q] - {m - 1}[R] is {verdict}")
        return verdict
