import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence, Tuple

from src.helpers.cubic.curve import (
    CubicForm,
    ProjPoint,
    _eval,
    _grad,
    good_reduction,
    reduce_point_mod_p,
)
from src.helpers.cubic.errors import (
    BadReductionError,
    CurveError,
    FieldMismatchError,
    LineInCurveError,
    PointNotOnCurveError,
    SingularPointError,
)

logger = logging.getLogger("helpers.cubic.group")


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _cross(u: Sequence[int], v: Sequence[int]) -> Tuple[int, int, int]:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _is_zero(values: Iterable[int], p: Optional[int]) -> bool:
    return all((v % p if p else v) == 0 for v in values)


def _check_on_curve(form: CubicForm, point: ProjPoint):
    value = _eval(form.coefficients, point.coords)
    if (value % point.p if point.p else value) != 0:
        raise PointNotOnCurveError(f"{point} is not on {form}")


@dataclass(frozen=True)
class GroupContext:
    """A smooth cubic with a chosen origin, over Q (p is None) or a good prime field."""
    form: CubicForm
    origin: ProjPoint

    def __post_init__(self):
        if self.p is not None and not good_reduction(self.form, self.p):
            raise BadReductionError(f"No group law on {self.form} mod the bad prime {self.p}")
        _check_on_curve(self.form, self.origin)

    @property
    def p(self) -> Optional[int]:
        return self.origin.p

    def reduced(self, p: int) -> "GroupContext":
        """The same curve and origin reduced mod a good prime"""
        return GroupContext(self.form, reduce_point_mod_p(self.origin, p))


def third_intersection(form: CubicForm, P: ProjPoint, Q: ProjPoint) -> ProjPoint:
    """
    Third point where the line PQ (the tangent at P when P = Q) meets the curve.

    With F(P) = F(Q) = 0 the binary cubic F(sP + tQ) is st(c2 s + c1 t), so the
    remaining root is read off without extracting any root.
    """
    if P.p != Q.p:
        raise FieldMismatchError(f"Cannot intersect {P} with {Q}")
    p = P.p
    _check_on_curve(form, P)
    _check_on_curve(form, Q)
    coeffs = form.coefficients

    if P != Q:
        c2 = _dot(_grad(coeffs, P.coords), Q.coords)
        c1 = _dot(_grad(coeffs, Q.coords), P.coords)
        if _is_zero((c1, c2), p):
            raise LineInCurveError(f"The line through {P} and {Q} lies on the curve")
        return ProjPoint(tuple(c1 * x - c2 * y for x, y in zip(P.coords, Q.coords)), p)

    tangent = _grad(coeffs, P.coords)
    if _is_zero(tangent, p):
        raise SingularPointError(f"{P} is a singular point of {form}")
    direction = None
    for axis in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        candidate = _cross(tangent, axis)
        if not _is_zero(candidate, p) and not _is_zero(_cross(P.coords, candidate), p):
            direction = candidate
            break
    content = gcd(*direction)
    direction = tuple(d // content for d in direction)

    # F(sP + tT) = t^2 (s * grad F(T).P + t * F(T)) since T lies on the tangent at P
    f_t = _eval(coeffs, direction)
    g_t = _dot(_grad(coeffs, direction), P.coords)
    if _is_zero((f_t, g_t), p):
        raise LineInCurveError(f"The tangent at {P} lies on the curve")
    return ProjPoint(tuple(f_t * x - g_t * y for x, y in zip(P.coords, direction)), p)


def _same_field(ctx: GroupContext, *points: ProjPoint):
    for point in points:
        if point.p != ctx.p:
            raise FieldMismatchError(f"{point} does not belong to the group over {ctx.origin}")


def add(ctx: GroupContext, P: ProjPoint, Q: ProjPoint) -> ProjPoint:
    """P + Q = O * (P * Q) where * is the third intersection"""
    _same_field(ctx, P, Q)
    return third_intersection(ctx.form, ctx.origin, third_intersection(ctx.form, P, Q))


def negate(ctx: GroupContext, P: ProjPoint) -> ProjPoint:
    _same_field(ctx, P)
    return third_intersection(ctx.form, P, third_intersection(ctx.form, ctx.origin, ctx.origin))


def subtract(ctx: GroupContext, P: ProjPoint, Q: ProjPoint) -> ProjPoint:
    return add(ctx, P, negate(ctx, Q))


def scalar_mul(ctx: GroupContext, m: int, P: ProjPoint) -> ProjPoint:
    """m-fold sum of P by double-and-add; negative m goes through negate"""
    _same_field(ctx, P)
    if m < 0:
        return negate(ctx, scalar_mul(ctx, -m, P))
    result, addend = ctx.origin, P
    while m:
        if m & 1:
            result = add(ctx, result, addend)
        m >>= 1
        if m:
            addend = add(ctx, addend, addend)
    return result


def check_divisor_relation(form: CubicForm, m: int, P: ProjPoint, Q: ProjPoint, R: ProjPoint,
                           origin: Optional[ProjPoint] = None) -> bool:
    """
    Whether [P] = m[Q] - (m-1)[R] in the divisor class group.

    The coefficients sum to 1, so the verdict does not depend on the origin;
    R itself is used unless another origin is given.
    """
    if m < 1:
        raise CurveError(f"m must be a positive integer, got {m}")
    ctx = GroupContext(form, origin if origin is not None else R)
    _same_field(ctx, P, Q, R)
    rhs = subtract(ctx, scalar_mul(ctx, m, Q), scalar_mul(ctx, m - 1, R))
    return rhs == P


def divide_point(ctx: GroupContext, m: int, D: ProjPoint, candidates: Iterable[ProjPoint]) -> Optional[ProjPoint]:
    """
    First candidate S with m*S = D, if any.

    A bounded search: None means no divisor was found among the candidates,
    never that D is not divisible by m.
    """
    for S in candidates:
        if scalar_mul(ctx, m, S) == D:
            return S
    return None
