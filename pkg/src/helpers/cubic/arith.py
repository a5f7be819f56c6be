import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import QQ, ZZ
from sympy.polys.galoistools import gf_factor
from sympy.polys.matrices import DomainMatrix

from src.helpers.cubic.errors import (
    DimensionError,
    FieldMismatchError,
    UndefinedValuationError,
    ZeroPolynomialError,
)

logger = logging.getLogger("helpers.cubic.arith")

Rational = Union[int, Fraction]


def as_fraction(value: Rational) -> Fraction:
    """Canonical rational: gcd(|num|, den) = 1 and den > 0 (Fraction guarantees both)."""
    return value if isinstance(value, Fraction) else Fraction(value)


def is_prime(n: int) -> bool:
    # BPSW inside sympy is deterministic below 2^64
    return bool(sympy.isprime(n))


def primes_up_to(limit: int) -> List[int]:
    if limit < 2:
        return []
    return list(sympy.primerange(2, limit + 1))


def next_prime(n: int) -> int:
    return int(sympy.nextprime(n))


@dataclass(frozen=True)
class FpElement:
    """An element of the prime field F_p"""
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "FpElement":
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldMismatchError(f"Cannot combine F_{self.p} with F_{other.p}")
            return other
        return FpElement(int(other), self.p)

    def __add__(self, other):
        return FpElement(self.value + self._coerce(other).value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.value - self._coerce(other).value, self.p)

    def __rsub__(self, other):
        return FpElement(self._coerce(other).value - self.value, self.p)

    def __mul__(self, other):
        return FpElement(self.value * self._coerce(other).value, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return FpElement(pow(self.value, exponent, self.p), self.p)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class ExactMatrix:
    """Rectangular matrix of exact rationals with optional row/column labels"""
    entries: Tuple[Tuple[Fraction, ...], ...]
    row_labels: Optional[Tuple[str, ...]] = None
    col_labels: Optional[Tuple[str, ...]] = None
    cols_hint: int = field(default=0, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in self.entries)
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise DimensionError(f"Ragged matrix with row widths {sorted(widths)}")
        object.__setattr__(self, "entries", rows)
        if self.row_labels is not None and len(self.row_labels) != len(rows):
            raise DimensionError("Row labels do not match the number of rows")
        if self.col_labels is not None and len(self.col_labels) != self.cols:
            raise DimensionError("Column labels do not match the number of columns")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Rational]], row_labels=None, col_labels=None,
                  cols: int = 0) -> "ExactMatrix":
        return cls(
            tuple(tuple(row) for row in rows),
            tuple(row_labels) if row_labels is not None else None,
            tuple(col_labels) if col_labels is not None else None,
            cols,
        )

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else self.cols_hint

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def submatrix(self, row_indices: Sequence[int], col_indices: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix.from_rows(
            [[self.entries[i][j] for j in col_indices] for i in row_indices],
            [self.row_labels[i] for i in row_indices] if self.row_labels else None,
            [self.col_labels[j] for j in col_indices] if self.col_labels else None,
            cols=len(col_indices),
        )

    def _integer_scaled(self) -> Tuple[List[List[int]], int]:
        """Rows scaled by the lcm of their denominators, with the product of the scales"""
        scaled, scale = [], 1
        for row in self.entries:
            row_scale = lcm(*(x.denominator for x in row)) if row else 1
            scale *= row_scale
            scaled.append([int(x * row_scale) for x in row])
        return scaled, scale

    def _domain_matrix(self) -> Tuple[DomainMatrix, int]:
        scaled, scale = self._integer_scaled()
        rep = [[ZZ(x) for x in row] for row in scaled]
        return DomainMatrix(rep, (self.rows, self.cols), ZZ), scale


def det_exact(matrix: ExactMatrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination over ZZ."""
    if not matrix.is_square:
        raise DimensionError(f"Determinant of a non-square {matrix.rows}x{matrix.cols} matrix")
    if matrix.rows == 0:
        return Fraction(1)
    dm, scale = matrix._domain_matrix()
    return Fraction(int(dm.det()), scale)


def primitive_vector(vector: Sequence[Rational]) -> Tuple[int, ...]:
    """Clear denominators, divide by the content, make the first nonzero entry positive."""
    fractions = [as_fraction(x) for x in vector]
    denominator = lcm(*(x.denominator for x in fractions)) if fractions else 1
    ints = [int(x * denominator) for x in fractions]
    content = 0
    for x in ints:
        content = gcd(content, x)
    if content == 0:
        return tuple(ints)
    ints = [x // content for x in ints]
    leading = next(x for x in ints if x != 0)
    if leading < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _rref(matrix: ExactMatrix) -> Tuple[List[list], List[int]]:
    dm, _ = matrix._domain_matrix()
    rref, pivots = dm.convert_to(QQ).rref()
    return rref.to_list(), list(pivots)


def pivot_columns(matrix: ExactMatrix) -> List[int]:
    """Indices of a maximal set of linearly independent columns (the rref pivots)"""
    if matrix.rows == 0:
        return []
    return _rref(matrix)[1]


def rank_nullspace(matrix: ExactMatrix) -> Tuple[int, List[Tuple[int, ...]]]:
    """Exact rank and a primitive integer basis of the right nullspace."""
    n = matrix.cols
    if matrix.rows == 0:
        return 0, [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rows, pivots = _rref(matrix)
    basis = []
    for free in (j for j in range(n) if j not in pivots):
        vector = [Fraction(0)] * n
        vector[free] = Fraction(1)
        for i, pivot_col in enumerate(pivots):
            entry = rows[i][free]
            vector[pivot_col] = -Fraction(int(entry.numerator), int(entry.denominator))
        basis.append(primitive_vector(vector))
    logger.debug(f"rank {len(pivots)} of a {matrix.rows}x{n} matrix, nullity {len(basis)}")
    return len(pivots), basis


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise UndefinedValuationError("v_p(0) is undefined")
    return int(sympy.multiplicity(p, abs(n)))


def poly_roots_mod_p(coeffs: Sequence[Union[int, FpElement]], p: int) -> List[int]:
    """
    Roots in F_p of a polynomial given by ascending coefficients, with multiplicity.

    Args:
        coeffs: coeffs[i] is the coefficient of x^i (ints or FpElement over F_p)
        p: prime modulus

    Returns:
        List[int]: sorted roots, each repeated according to its multiplicity

    Raises:
        ZeroPolynomialError: if every coefficient vanishes mod p
    """
    values = []
    for c in coeffs:
        if isinstance(c, FpElement):
            if c.p != p:
                raise FieldMismatchError(f"Coefficient over F_{c.p} used with p = {p}")
            c = c.value
        values.append(int(c) % p)
    while values and values[-1] == 0:
        values.pop()
    if not values:
        raise ZeroPolynomialError(f"Zero polynomial mod {p} has no finite root set")
    if len(values) == 1:
        return []
    if len(values) == 2:
        return [(-values[0] * pow(values[1], -1, p)) % p]

    _, factors = gf_factor([ZZ(c) for c in reversed(values)], p, ZZ)
    roots = []
    for factor, multiplicity in factors:
        if len(factor) == 2:
            roots.extend([int(-factor[1]) % p] * multiplicity)
    return sorted(roots)
