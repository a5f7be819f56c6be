from fractions import Fraction

import pytest

from src.helpers.cubic.arith import (
    ExactMatrix,
    FpElement,
    det_exact,
    is_prime,
    pivot_columns,
    poly_roots_mod_p,
    primes_up_to,
    primitive_vector,
    rank_nullspace,
    valuation,
)
from src.helpers.cubic.errors import (
    DimensionError,
    FieldMismatchError,
    UndefinedValuationError,
    ZeroPolynomialError,
)


def _apply(matrix: ExactMatrix, vector):
    return [sum(a * b for a, b in zip(row, vector)) for row in matrix.entries]


def test_primes():
    assert primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
    assert primes_up_to(1) == []
    assert is_prime(10007) and not is_prime(10001)


def test_fp_element_arithmetic():
    three, five = FpElement(3, 7), FpElement(5, 7)
    assert (three * five).value == 1
    assert three.inverse() == five
    assert (three - five).value == 5
    assert (1 - three).value == 5
    assert (three ** -1) == five
    assert (three / five).value == 2
    with pytest.raises(FieldMismatchError):
        three + FpElement(1, 11)
    with pytest.raises(ZeroDivisionError):
        FpElement(7, 7).inverse()


def test_det_exact_integer_and_rational():
    assert det_exact(ExactMatrix.from_rows([[1, 2], [3, 4]])) == -2
    halves = ExactMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]])
    assert det_exact(halves) == Fraction(1, 60)
    assert det_exact(ExactMatrix.from_rows([])) == 1


def test_det_exact_matches_cofactor_expansion():
    rows = [[2, -1, 0, 3], [1, 4, -2, 0], [0, 5, 1, -1], [-3, 0, 2, 2]]

    def cofactor(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cofactor([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))

    assert det_exact(ExactMatrix.from_rows(rows)) == cofactor(rows)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        det_exact(ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6]]))
    with pytest.raises(DimensionError):
        ExactMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(DimensionError):
        ExactMatrix.from_rows([[1, 2]], row_labels=["a", "b"])


def test_submatrix_keeps_labels():
    matrix = ExactMatrix.from_rows([[1, 2, 3], [4, 5, 6]], row_labels=["r0", "r1"], col_labels=["a", "b", "c"])
    sub = matrix.submatrix([1], [0, 2])
    assert sub.entries == ((4, 6),)
    assert sub.row_labels == ("r1",)
    assert sub.col_labels == ("a", "c")


def test_rank_nullspace():
    matrix = ExactMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    rank, basis = rank_nullspace(matrix)
    assert rank == 1
    assert sorted(basis) == [(2, -1, 0), (3, 0, -1)]
    for vector in basis:
        assert _apply(matrix, vector) == [0, 0]

    full_rank, empty = rank_nullspace(ExactMatrix.from_rows([[1, 0], [0, 1]]))
    assert (full_rank, empty) == (2, [])


def test_nullspace_vectors_are_primitive():
    matrix = ExactMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3), 1], [1, Fraction(2, 3), 2]])
    rank, basis = rank_nullspace(matrix)
    assert rank == 1 and len(basis) == 2
    for vector in basis:
        assert _apply(matrix, vector) == [0, 0]
        assert next(x for x in vector if x) > 0


def test_pivot_columns():
    assert pivot_columns(ExactMatrix.from_rows([[0, 1, 1], [0, 2, 3]])) == [1, 2]
    assert pivot_columns(ExactMatrix.from_rows([])) == []


def test_primitive_vector():
    assert primitive_vector([Fraction(1, 2), Fraction(-1, 3), 0]) == (3, -2, 0)
    assert primitive_vector([-2, 4, -6]) == (1, -2, 3)
    assert primitive_vector([0, 0]) == (0, 0)


def test_valuation():
    assert valuation(48, 2) == 4
    assert valuation(-45, 3) == 2
    assert valuation(7, 5) == 0
    with pytest.raises(UndefinedValuationError):
        valuation(0, 5)


def test_valuation_matches_repeated_division():
    n, p, count = 5 ** 7 * 12, 5, 0
    m = n
    while m % p == 0:
        m //= p
        count += 1
    assert valuation(n, p) == count == 7


def test_poly_roots_mod_p():
    assert poly_roots_mod_p([-1, 0, 1], 7) == [1, 6]
    assert poly_roots_mod_p([1, -2, 1], 7) == [1, 1]
    assert poly_roots_mod_p([1, 0, 0, 1], 7) == [3, 5, 6]
    assert poly_roots_mod_p([3, 7], 7) == []
    assert poly_roots_mod_p([FpElement(2, 5), FpElement(1, 5)], 5) == [3]
    with pytest.raises(ZeroPolynomialError):
        poly_roots_mod_p([7, 14, 0], 7)
