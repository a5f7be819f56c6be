import logging
from dataclasses import dataclass, field
from math import ceil
from typing import List, Optional, Sequence

from mpmath import mp, log
from sympy.utilities.iterables import connected_components

from src.constants import MAZUR_TORSION_BOUND, PARTITION_METHOD_NOTE
from src.helpers.cubic.curve import CubicForm, ProjPoint, height
from src.helpers.cubic.errors import BoundInputError, CurveError
from src.helpers.cubic.group import (
    GroupContext,
    add,
    check_divisor_relation,
    divide_point,
    scalar_mul,
    subtract,
)
from src.types import HeightExponentEstimate, HeightExponentRow

logger = logging.getLogger("helpers.cubic.descent")


@dataclass(frozen=True)
class XPair:
    """A point (P, Q) of X_R: [P] = m[Q] - (m-1)[R]"""
    P: ProjPoint
    Q: ProjPoint
    R: ProjPoint
    m: int


@dataclass
class ClassPartition:
    m: int
    classes: List[List[ProjPoint]]
    method: str = PARTITION_METHOD_NOTE
    rank: Optional[int] = None
    class_bound: Optional[int] = None  # 16 m^r when a rank is supplied
    search_size: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def within_bound(self) -> Optional[bool]:
        if self.class_bound is None:
            return None
        return len(self.classes) <= self.class_bound


def search_set(ctx: GroupContext, points: Sequence[ProjPoint], radius: int) -> List[ProjPoint]:
    """Multiples k*P with |k| <= radius of the given points, deduplicated and sorted"""
    found = set()
    for P in points:
        for k in range(-radius, radius + 1):
            found.add(scalar_mul(ctx, k, P))
    return sorted(found)


def partition_classes(points: Sequence[ProjPoint], m: int, ctx: GroupContext,
                      search: Sequence[ProjPoint], rank: Optional[int] = None) -> ClassPartition:
    """
    Split points by the m-descent relation, P ~ Q when P - Q = m*S for some S in search.

    The divisibility test only looks inside the search set, so the partition can be
    strictly finer than the true one; the transitive closure is taken afterwards.
    """
    if m < 1:
        raise CurveError(f"m must be a positive integer, got {m}")
    nodes = sorted(set(points))
    class_bound = MAZUR_TORSION_BOUND * m ** rank if rank is not None else None
    if m == 1 or len(nodes) <= 1:
        classes = [nodes] if nodes else []
        return ClassPartition(m, classes, rank=rank, class_bound=class_bound, search_size=len(search))

    edges = []
    for i, P in enumerate(nodes):
        for j in range(i + 1, len(nodes)):
            if divide_point(ctx, m, subtract(ctx, P, nodes[j]), search) is not None:
                edges.append((i, j))
    components = connected_components((list(range(len(nodes))), edges))
    classes = sorted(([nodes[i] for i in sorted(component)] for component in components), key=lambda c: c[0])
    logger.debug(f"{len(nodes)} points fall into {len(classes)} classes for m = {m}")

    partition = ClassPartition(m, classes, rank=rank, class_bound=class_bound, search_size=len(search))
    if partition.within_bound is False:
        partition.notes.append(f"{len(classes)} classes exceed 16 m^r = {class_bound}; the supplied rank looks wrong")
    return partition


def default_seeds(ctx: GroupContext, points: Sequence[ProjPoint], seed_count: int) -> List[ProjPoint]:
    """k*P for 1 <= k <= seed_count over the non-origin points, in order, deduplicated"""
    seeds = []
    for P in points:
        if P == ctx.origin:
            continue
        for k in range(1, seed_count + 1):
            multiple = scalar_mul(ctx, k, P)
            if multiple not in seeds:
                seeds.append(multiple)
    return seeds


def build_x_points(form: CubicForm, R: ProjPoint, m: int, seeds: Sequence[ProjPoint],
                   cap: Optional[int] = None) -> List[XPair]:
    """
    Pairs (m*Q - (m-1)*R, Q) for each seed Q, in seed order and deduplicated.

    Every emitted pair is checked against the divisor relation.
    """
    if m < 1:
        raise CurveError(f"m must be a positive integer, got {m}")
    ctx = GroupContext(form, R)
    shift = scalar_mul(ctx, m - 1, R)
    pairs, seen = [], set()
    for Q in seeds:
        if cap is not None and len(pairs) >= cap:
            break
        P = subtract(ctx, scalar_mul(ctx, m, Q), shift)
        if (P, Q) in seen:
            continue
        if not check_divisor_relation(form, m, P, Q, R):
            raise CurveError(f"Constructed pair ({P}, {Q}) fails the divisor relation")
        seen.add((P, Q))
        pairs.append(XPair(P, Q, R, m))
    return pairs


def pairs_in_height_box(form: CubicForm, R: ProjPoint, m: int, points: Sequence[ProjPoint],
                        bound: int, candidates: Sequence[ProjPoint]) -> List[XPair]:
    """X_R pairs with H(P) <= bound; Q comes from a bounded m-division search."""
    ctx = GroupContext(form, R)
    shift = scalar_mul(ctx, m - 1, R)
    pairs = []
    for P in points:
        if height(P) > bound:
            continue
        if m == 1:
            pairs.append(XPair(P, P, R, m))
            continue
        Q = divide_point(ctx, m, add(ctx, P, shift), candidates)
        if Q is not None:
            pairs.append(XPair(P, Q, R, m))
    return pairs


def estimate_height_exponent(pairs: Sequence[XPair]) -> HeightExponentEstimate:
    """
    Empirical lower estimate of the exponent A with H(Q) <= max(3, H(P), H(R))^A.

    Only a lower estimate of a valid A, never the constant itself.
    """
    if not pairs:
        raise BoundInputError("Height exponent estimate needs at least one pair")
    rows = []
    for index, pair in enumerate(pairs):
        h_p, h_q, h_r = height(pair.P), height(pair.Q), height(pair.R)
        ratio = log(mp.mpf(h_q)) / log(mp.mpf(max(3, h_p, h_r)))
        rows.append(HeightExponentRow(index=index, height_p=h_p, height_q=h_q, height_r=h_r, ratio=float(ratio)))
    estimate = max(row.ratio for row in rows)
    return HeightExponentEstimate(estimate=estimate, suggested_A=max(1, ceil(estimate)), rows=rows)
