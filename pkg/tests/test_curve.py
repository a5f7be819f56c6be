from fractions import Fraction
from itertools import product

import pytest

from src.helpers.cubic.arith import primes_up_to
from src.helpers.cubic.curve import (
    CubicForm,
    ProjPoint,
    coefficient_norm,
    count_points_fp,
    enumerate_rational_points,
    evaluate,
    extension_singular_point,
    good_reduction,
    gradient,
    height,
    normalize_point,
    points_mod_p,
    reduce_point_mod_p,
    reduction_profile,
    singular_points_mod_p,
    smoothness_verdict,
)
from src.helpers.cubic.errors import BadReductionError, CurveError, FieldMismatchError
from tests.conftest import FERMAT


def _brute_force_count(form: CubicForm, p: int) -> int:
    points = set()
    for raw in product(range(p), repeat=3):
        if any(raw) and evaluate(form, raw, p) == 0:
            points.add(ProjPoint(raw, p))
    return len(points)


def test_form_is_primitive_and_named_loosely():
    doubled = CubicForm((2, 0, 0, 0, 0, 0, 2, 0, 0, 2), "doubled")
    assert doubled.coefficients == FERMAT
    assert doubled == CubicForm(FERMAT, "fermat")
    assert CubicForm.from_monomials({(3, 0, 0): 1, (0, 3, 0): 1, (0, 0, 3): -6}).coefficient((0, 0, 3)) == -6
    assert str(CubicForm(FERMAT)) == "x0^3 + x1^3 + x2^3"


def test_form_rejects_bad_input():
    with pytest.raises(CurveError):
        CubicForm((1, 2, 3))
    with pytest.raises(CurveError):
        CubicForm((0,) * 10)
    with pytest.raises(CurveError):
        CubicForm.from_payload(["1", "x"] + ["0"] * 8)
    with pytest.raises(CurveError):
        CubicForm.from_monomials({(2, 0, 0): 1})


def test_point_normalization():
    assert ProjPoint((-2, 4, -6)).coords == (1, -2, 3)
    assert ProjPoint((0, -3, 6)).coords == (0, 1, -2)
    assert ProjPoint((2, 4, 6), 7).coords == (1, 2, 3)
    assert normalize_point([Fraction(1, 2), Fraction(-1, 3), 1]).coords == (3, -2, 6)
    assert str(ProjPoint((0, 1, -1))) == "[0:1:-1]"
    with pytest.raises(CurveError):
        ProjPoint((0, 0, 0))
    with pytest.raises(CurveError):
        ProjPoint((7, 14, 0), 7)


def test_height():
    assert height(ProjPoint((1, -2, 3))) == 3
    assert height(ProjPoint((17, 37, 21))) == 37
    with pytest.raises(FieldMismatchError):
        height(ProjPoint((1, 2, 3), 5))


def test_evaluate_and_gradient(f6, generator):
    assert evaluate(f6, generator) == 0
    assert evaluate(f6, (1, 1, 1)) == -4
    assert evaluate(f6, ProjPoint((1, 1, 1), 5)) == 1
    assert gradient(f6, (1, -1, 0)) == (3, 3, 0)
    with pytest.raises(FieldMismatchError):
        evaluate(f6, ProjPoint((1, 1, 1), 5), 7)
    assert coefficient_norm(f6) == 6


def test_good_reduction(fermat, f6, selmer):
    assert good_reduction(fermat, 2)
    assert not good_reduction(fermat, 3)
    assert not good_reduction(f6, 2)
    assert not good_reduction(selmer, 5)
    assert good_reduction(selmer, 7)


def test_smoothness_verdicts(fermat, selmer, nodal):
    verdict = smoothness_verdict(fermat)
    assert verdict.kind == "SmoothCertified" and verdict.witness_prime == 5
    assert smoothness_verdict(selmer).witness_prime == 7

    singular = smoothness_verdict(nodal)
    assert singular.kind == "SingularCertified"
    assert singular.singular_point == (0, 0, 1)
    assert not singular.is_smooth


def test_undetermined_when_search_is_too_small():
    # singular only at [1:1:1], outside a height-0 search
    form = CubicForm.from_monomials({(3, 0, 0): 1, (0, 3, 0): 1, (1, 1, 1): -3, (0, 0, 3): 1})
    verdict = smoothness_verdict(form, prime_budget=3, search_height=0)
    assert verdict.kind == "Undetermined"
    assert verdict.primes_tried == [5, 7, 11]


def test_fp_counts(fermat, f6):
    assert count_points_fp(fermat, 5) == 6
    assert count_points_fp(fermat, 7) == 9
    assert count_points_fp(f6, 5) == 6
    for p in (7, 11, 13):
        assert count_points_fp(fermat, p) == _brute_force_count(fermat, p)
        assert count_points_fp(f6, p) == _brute_force_count(f6, p)


def test_fp_count_rejects_bad_prime(selmer):
    with pytest.raises(BadReductionError):
        count_points_fp(selmer, 5)


def test_hasse_bound(fermat, f6, selmer, rank_one_37):
    for form in (fermat, f6, selmer, rank_one_37):
        for p in primes_up_to(200):
            if not good_reduction(form, p):
                continue
            defect = count_points_fp(form, p) - (p + 1)
            assert defect * defect <= 4 * p, (form.name, p)


def test_points_mod_p_lie_on_curve(f6):
    points = points_mod_p(f6, 13)
    assert points == sorted(set(points))
    assert all(evaluate(f6, P) == 0 for P in points)


def test_reduce_point(generator):
    assert reduce_point_mod_p(generator, 5).coords == (1, 1, 3)
    with pytest.raises(FieldMismatchError):
        reduce_point_mod_p(ProjPoint((1, 1, 3), 5), 5)


def test_singular_points_mod_p(nodal, f6):
    assert ProjPoint((0, 0, 1), 7) in singular_points_mod_p(nodal, 7)
    assert singular_points_mod_p(f6, 5) == []


def test_enumerate_fermat(fermat):
    expected = [ProjPoint((0, 1, -1)), ProjPoint((1, -1, 0)), ProjPoint((1, 0, -1))]
    assert enumerate_rational_points(fermat, 10) == expected
    assert enumerate_rational_points(fermat, 100) == expected


@pytest.mark.slow
def test_enumerate_fermat_large_box(fermat):
    assert len(enumerate_rational_points(fermat, 1000, workers=4)) == 3


def test_enumerate_f6(f6, generator):
    points = enumerate_rational_points(f6, 40)
    assert generator in points
    assert points == [ProjPoint((1, -1, 0)), generator, ProjPoint((37, 17, 21))]


def test_enumerate_selmer_is_empty(selmer):
    assert enumerate_rational_points(selmer, 100) == []


def test_enumerate_matches_naive_sweep(rank_one_37):
    bound = 15
    naive = set()
    for raw in product(range(-bound, bound + 1), repeat=3):
        if any(raw) and evaluate(rank_one_37, raw) == 0:
            naive.add(ProjPoint(raw))
    points = enumerate_rational_points(rank_one_37, bound)
    assert points == sorted(naive)
    assert len(points) == 13
    assert enumerate_rational_points(rank_one_37, bound, workers=3) == points


def test_enumerate_rejects_empty_box(fermat):
    with pytest.raises(CurveError):
        enumerate_rational_points(fermat, 0)


def test_reduction_profile(f6, fermat):
    profile = reduction_profile(f6, 100)
    assert profile.bad_primes == [2, 3]
    assert profile.pi_c == 6
    assert profile.witnesses[2] == (0, 0, 1)
    assert reduction_profile(fermat, 100, workers=2).bad_primes == [3]


def test_bad_prime_without_a_rational_singular_point():
    # mod 5 the cubic is x2 (x0^2 - 2 x1^2 - x2^2); the line meets the conic where x0^2 = 2 x1^2
    form = CubicForm((5, 0, 1, 0, 0, 0, 0, -2, 0, -1))
    assert singular_points_mod_p(form, 5) == []

    profile = reduction_profile(form, 10)
    assert profile.bad_primes == [2, 5]
    assert profile.witnesses == {2: (0, 1, 0)}
    lifted = profile.extension_witnesses[5]
    assert lifted.degree == 2
    assert lifted.modulus == [1, 0, 3]
    assert lifted.coordinates == ([1, 0], [1], [0])
    assert extension_singular_point(form, 5) == lifted
