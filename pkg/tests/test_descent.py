import pytest

from src.helpers.cubic.curve import ProjPoint, enumerate_rational_points, height
from src.helpers.cubic.descent import (
    build_x_points,
    default_seeds,
    estimate_height_exponent,
    pairs_in_height_box,
    partition_classes,
    search_set,
)
from src.helpers.cubic.errors import BoundInputError, CurveError
from src.helpers.cubic.group import GroupContext, check_divisor_relation, scalar_mul


@pytest.fixture
def fermat_points(fermat):
    return enumerate_rational_points(fermat, 10)


def test_search_set_of_fermat(fermat, origin, fermat_points):
    ctx = GroupContext(fermat, origin)
    assert search_set(ctx, fermat_points, 2) == fermat_points


def test_fermat_classes(fermat, origin, fermat_points):
    ctx = GroupContext(fermat, origin)
    search = search_set(ctx, fermat_points, 2)

    halves = partition_classes(fermat_points, 2, ctx, search, rank=0)
    assert len(halves.classes) == 1
    assert halves.class_bound == 16 and halves.within_bound

    thirds = partition_classes(fermat_points, 3, ctx, search, rank=0)
    assert [len(c) for c in thirds.classes] == [1, 1, 1]
    assert thirds.within_bound

    assert len(partition_classes(fermat_points, 1, ctx, search).classes) == 1
    assert partition_classes(fermat_points, 2, ctx, search).within_bound is None


def test_empty_search_gives_a_finer_partition(fermat, origin, fermat_points):
    ctx = GroupContext(fermat, origin)
    partition = partition_classes(fermat_points, 2, ctx, [], rank=0)
    assert len(partition.classes) == 3
    assert partition.search_size == 0
    assert partition.notes == []


def test_partition_rejects_nonpositive_m(fermat, origin, fermat_points):
    with pytest.raises(CurveError):
        partition_classes(fermat_points, 0, GroupContext(fermat, origin), [])


def test_default_seeds(fermat, origin, fermat_points):
    ctx = GroupContext(fermat, origin)
    seeds = default_seeds(ctx, fermat_points, 3)
    assert seeds == [ProjPoint((0, 1, -1)), ProjPoint((1, 0, -1)), origin]


def test_build_x_points_from_generator_multiples(f6, origin, generator):
    ctx = GroupContext(f6, origin)
    seeds = [scalar_mul(ctx, k, generator) for k in range(1, 9)]
    pairs = build_x_points(f6, origin, 2, seeds)
    assert len(pairs) == 8
    assert pairs[0].P.coords == (2237723, -1805723, 960540)
    assert all(check_divisor_relation(f6, 2, pair.P, pair.Q, origin) for pair in pairs)
    assert len(build_x_points(f6, origin, 2, seeds, cap=3)) == 3


def test_build_x_points_with_a_non_origin_r(f6, origin, generator):
    # R = G is not the group origin: P = 3Q - 2G
    ctx = GroupContext(f6, origin)
    seeds = [origin, ProjPoint((37, 17, 21))]
    pairs = build_x_points(f6, generator, 3, seeds)
    assert all(check_divisor_relation(f6, 3, pair.P, pair.Q, generator, origin) for pair in pairs)
    assert pairs[0].P == scalar_mul(ctx, -2, generator)


def test_m_equal_one_gives_the_diagonal(fermat, origin, fermat_points):
    pairs = build_x_points(fermat, origin, 1, fermat_points)
    assert [(pair.P, pair.Q) for pair in pairs] == [(P, P) for P in fermat_points]


def test_pairs_in_height_box(fermat, origin, fermat_points):
    ctx = GroupContext(fermat, origin)
    pairs = pairs_in_height_box(fermat, origin, 2, fermat_points, 10, search_set(ctx, fermat_points, 2))
    assert len(pairs) == 3
    for pair in pairs:
        assert height(pair.P) <= 10
        assert scalar_mul(ctx, 2, pair.Q) == pair.P


def test_height_exponent_estimate(f6, origin, generator):
    pairs = build_x_points(f6, origin, 2, [generator])
    estimate = estimate_height_exponent(pairs)
    assert 0 < estimate.estimate < 1
    assert estimate.suggested_A == 1
    assert estimate.rows[0].height_q == 37

    growing = build_x_points(f6, origin, 1, [scalar_mul(GroupContext(f6, origin), 2, generator)])
    assert estimate_height_exponent(growing).estimate == pytest.approx(1.0)

    with pytest.raises(BoundInputError):
        estimate_height_exponent([])


def test_larger_search_sets_only_merge_classes(f6, origin, generator):
    ctx = GroupContext(f6, origin)
    points = [scalar_mul(ctx, k, generator) for k in range(-4, 5)]
    searches = [[origin], search_set(ctx, [generator], 1), search_set(ctx, [generator], 2)]
    partitions = [partition_classes(points, 2, ctx, search) for search in searches]

    counts = [len(partition.classes) for partition in partitions]
    assert counts == sorted(counts, reverse=True)
    assert counts[0] == len(points) and counts[-1] == 2
    for finer, coarser in zip(partitions, partitions[1:]):
        for cls in finer.classes:
            assert any(set(cls) <= set(other) for other in coarser.classes)
