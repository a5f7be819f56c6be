import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy
from mpmath import mp, log

from src.constants import CUBIC_MONOMIALS, DEFAULT_OPTIONS
from src.helpers.cubic.arith import as_fraction, next_prime, poly_roots_mod_p, primes_up_to
from src.helpers.cubic.errors import CurveError, FieldMismatchError, BadReductionError
from src.types import CurveSummary, ExtensionWitness, ReductionProfile, SmoothnessVerdict

logger = logging.getLogger("helpers.cubic.curve")

Coords = Tuple[int, int, int]
_X = sympy.symbols("x0:3")


@dataclass(frozen=True)
class CubicForm:
    """A primitive ternary cubic, coefficients stored in CUBIC_MONOMIALS order"""
    coefficients: Tuple[int, ...]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if len(coeffs) != len(CUBIC_MONOMIALS):
            raise CurveError(f"A ternary cubic has 10 coefficients, got {len(coeffs)}")
        content = gcd(*coeffs)
        if content == 0:
            raise CurveError("The zero form does not define a curve")
        object.__setattr__(self, "coefficients", tuple(c // content for c in coeffs))

    @classmethod
    def from_monomials(cls, mapping: Mapping[Tuple[int, int, int], int], name: Optional[str] = None) -> "CubicForm":
        unknown = set(mapping) - set(CUBIC_MONOMIALS)
        if unknown:
            raise CurveError(f"Not cubic monomials: {sorted(unknown)}")
        return cls(tuple(mapping.get(e, 0) for e in CUBIC_MONOMIALS), name)

    @classmethod
    def from_payload(cls, values: Sequence[Union[int, str]], name: Optional[str] = None) -> "CubicForm":
        try:
            return cls(tuple(int(v) for v in values), name)
        except (TypeError, ValueError) as e:
            raise CurveError(f"Coefficients must be integers or decimal strings: {e}")

    def coefficient(self, exponents: Tuple[int, int, int]) -> int:
        return self.coefficients[CUBIC_MONOMIALS.index(tuple(exponents))]

    def as_dict(self) -> Dict[Tuple[int, int, int], int]:
        return dict(zip(CUBIC_MONOMIALS, self.coefficients))

    def summary(self) -> CurveSummary:
        return CurveSummary(name=self.name, coefficients=list(self.coefficients))

    def __str__(self):
        terms = []
        for c, (e0, e1, e2) in zip(self.coefficients, CUBIC_MONOMIALS):
            if c == 0:
                continue
            powers = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate((e0, e1, e2)) if e
            )
            terms.append(f"{c}*{powers}" if abs(c) != 1 else f"{'-' if c < 0 else ''}{powers}")
        return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True, order=True)
class ProjPoint:
    """
    A normalized point of P^2 over Q (p is None) or over F_p.

    Rational points are primitive integer triples whose first nonzero coordinate
    is positive; F_p points have first nonzero coordinate 1.
    """
    coords: Coords
    p: Optional[int] = None

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != 3:
            raise CurveError(f"Projective plane points have 3 coordinates, got {len(coords)}")
        if self.p is None:
            content = gcd(*coords)
            if content == 0:
                raise CurveError("(0, 0, 0) is not a projective point")
            if next(c for c in coords if c) < 0:
                content = -content
            coords = tuple(c // content for c in coords)
        else:
            coords = tuple(c % self.p for c in coords)
            leading = next((c for c in coords if c), 0)
            if leading == 0:
                raise CurveError(f"(0, 0, 0) is not a point of P^2(F_{self.p})")
            inverse = pow(leading, -1, self.p)
            coords = tuple(c * inverse % self.p for c in coords)
        object.__setattr__(self, "coords", coords)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __iter__(self):
        return iter(self.coords)

    def __str__(self):
        text = "[" + ":".join(str(c) for c in self.coords) + "]"
        return text if self.p is None else f"{text} mod {self.p}"


def normalize_point(raw: Sequence[Union[int, Fraction]], p: Optional[int] = None) -> ProjPoint:
    """Primitive sign-normalized representative of a triple of rationals (or of F_p values)."""
    values = [as_fraction(x) for x in raw]
    denominator = lcm(*(x.denominator for x in values))
    return ProjPoint(tuple(int(x * denominator) for x in values), p)


def height(point: ProjPoint) -> int:
    if point.p is not None:
        raise FieldMismatchError("Height is only defined for rational points")
    return max(abs(c) for c in point.coords)


def coefficient_norm(form: CubicForm) -> int:
    return max(abs(c) for c in form.coefficients)


def _eval(coeffs: Sequence[int], x: Sequence[int]) -> int:
    x0, x1, x2 = x
    return sum(
        c * x0 ** e0 * x1 ** e1 * x2 ** e2
        for c, (e0, e1, e2) in zip(coeffs, CUBIC_MONOMIALS) if c
    )


def _grad(coeffs: Sequence[int], x: Sequence[int]) -> Tuple[int, int, int]:
    x0, x1, x2 = x
    partials = [0, 0, 0]
    for c, e in zip(coeffs, CUBIC_MONOMIALS):
        if not c:
            continue
        for i in range(3):
            if e[i]:
                lowered = list(e)
                lowered[i] -= 1
                partials[i] += c * e[i] * x0 ** lowered[0] * x1 ** lowered[1] * x2 ** lowered[2]
    return partials[0], partials[1], partials[2]


def _coords_and_modulus(point: Union[ProjPoint, Sequence[int]], p: Optional[int]):
    if isinstance(point, ProjPoint):
        if p is not None and point.p is not None and p != point.p:
            raise FieldMismatchError(f"Point over F_{point.p} evaluated mod {p}")
        return point.coords, point.p if p is None else p
    return tuple(point), p


def evaluate(form: CubicForm, point: Union[ProjPoint, Sequence[int]], p: Optional[int] = None) -> int:
    """F at the representative; reduced into [0, p) for points over F_p."""
    coords, modulus = _coords_and_modulus(point, p)
    value = _eval(form.coefficients, coords)
    return value % modulus if modulus else value


def gradient(form: CubicForm, point: Union[ProjPoint, Sequence[int]], p: Optional[int] = None) -> Tuple[int, int, int]:
    coords, modulus = _coords_and_modulus(point, p)
    partials = _grad(form.coefficients, coords)
    if modulus:
        return tuple(d % modulus for d in partials)
    return partials


def on_curve(form: CubicForm, point: ProjPoint) -> bool:
    return evaluate(form, point) == 0


def _is_singular(coeffs: Sequence[int], x: Sequence[int], p: Optional[int] = None) -> bool:
    values = (_eval(coeffs, x),) + _grad(coeffs, x)
    return all((v % p if p else v) == 0 for v in values)


def _residual_in_x2(coeffs: Sequence[int], x0: int, x1: int) -> Tuple[int, int, int, int]:
    """Ascending coefficients of t -> F(x0, x1, t)"""
    c300, c210, c201, c120, c111, c102, c030, c021, c012, c003 = coeffs
    return (
        ((c300 * x0 + c210 * x1) * x0 + c120 * x1 * x1) * x0 + c030 * x1 ** 3,
        (c201 * x0 + c111 * x1) * x0 + c021 * x1 * x1,
        c102 * x0 + c012 * x1,
        c003,
    )


def _singular_ideal(form: CubicForm, p: int) -> List[sympy.Expr]:
    """F mod p and its three partials as sympy expressions, zero generators dropped"""
    reduced = [c % p for c in form.coefficients]
    generators = []
    for i in range(-1, 3):
        terms = []
        for c, e in zip(reduced, CUBIC_MONOMIALS):
            if i < 0:
                coefficient, exponents = c, e
            else:
                if not e[i]:
                    continue
                coefficient = c * e[i] % p
                exponents = tuple(k - (j == i) for j, k in enumerate(e))
            if coefficient:
                terms.append(coefficient * _X[0] ** exponents[0] * _X[1] ** exponents[1] * _X[2] ** exponents[2])
        if terms:
            generators.append(sympy.Add(*terms))
    return generators


@lru_cache(maxsize=None)
def good_reduction(form: CubicForm, p: int) -> bool:
    """
    True iff F mod p has no singular point over the algebraic closure of F_p.

    The singular locus is cut out by F and its three partials; the reduction is good
    exactly when that homogeneous ideal is zero-dimensional (only the trivial zero).
    """
    basis = sympy.groebner(_singular_ideal(form, p), *_X, modulus=p, order="grevlex")
    verdict = bool(basis.is_zero_dimensional)
    logger.debug(f"reduction of {form} at {p}: {'good' if verdict else 'bad'}")
    return verdict


def points_mod_p(form: CubicForm, p: int) -> List[ProjPoint]:
    """Every point of the reduced curve in P^2(F_p), sorted by coordinates."""
    coeffs = [c % p for c in form.coefficients]
    found = []

    def solve(ascending) -> Iterable[int]:
        if not any(c % p for c in ascending):
            return range(p)
        return sorted(set(poly_roots_mod_p(ascending, p)))

    for u in range(p):
        for t in solve(_residual_in_x2(coeffs, 1, u)):
            found.append(ProjPoint((1, u, t), p))
    for t in solve(_residual_in_x2(coeffs, 0, 1)):
        found.append(ProjPoint((0, 1, t), p))
    if coeffs[9] == 0:
        found.append(ProjPoint((0, 0, 1), p))
    return sorted(found)


def count_points_fp(form: CubicForm, p: int) -> int:
    """n_p = #C(F_p) for a prime of good reduction"""
    if not good_reduction(form, p):
        raise BadReductionError(f"{p} is a prime of bad reduction for {form}")
    return len(points_mod_p(form, p))


def singular_points_mod_p(form: CubicForm, p: int) -> List[ProjPoint]:
    """F_p-rational singular points of the reduced curve (possibly empty at a bad prime)."""
    return [P for P in points_mod_p(form, p) if _is_singular(form.coefficients, P.coords, p)]


def _residues(poly: sympy.Poly, p: int) -> List[int]:
    return [int(c) % p for c in poly.all_coeffs()]


def _solved_coordinate(fiber: Sequence[sympy.Expr], var: sympy.Symbol, last: sympy.Symbol,
                       p: int) -> Optional[sympy.Poly]:
    """var as a polynomial in last when the fiber basis holds an element var - h(last)"""
    for element in fiber:
        rest = sympy.expand(var - element)
        if not rest.has(var) and sympy.Poly(element, var, last, modulus=p).degree(var) == 1:
            return sympy.Poly(rest, last, modulus=p)
    return None


def extension_singular_point(form: CubicForm, p: int) -> Optional[ExtensionWitness]:
    """
    A singular point of F mod p over F_p[t]/(g), found by elimination.

    Runs over the affine charts x2 = 1 and (x2 = 0, x1 = 1). In each chart a lex basis of
    the singular ideal yields an eliminant in one coordinate; every irreducible factor g of
    it fixes a candidate field, and the point is kept once the other coordinate is a
    polynomial in the root t and F and its partials vanish there modulo g.
    """
    x0, x1, x2 = _X
    generators = _singular_ideal(form, p)
    charts = (({x2: 1}, (x0, x1)), ({x2: 1}, (x1, x0)), ({x2: 0, x1: 1}, (x0,)))
    for fixed, gens in charts:
        affine = [e for e in (sympy.expand(g.subs(fixed)) for g in generators) if e != 0]
        if not affine:
            continue
        basis = sympy.groebner(affine, *gens, modulus=p, order="lex")
        if list(basis.exprs) == [1]:
            continue
        last = gens[-1]
        eliminant = next((e for e in basis.exprs if all(not e.has(v) for v in gens[:-1])), None)
        if eliminant is None:
            continue

        _, factors = sympy.Poly(eliminant, last, modulus=p).factor_list()
        for factor, _ in sorted(factors, key=lambda f: (f[0].degree(), _residues(f[0], p))):
            g = factor.monic()
            if g.degree() < 1:
                continue
            fiber = sympy.groebner(list(basis.exprs) + [g.as_expr()], *gens, modulus=p, order="lex")
            if list(fiber.exprs) == [1]:
                continue
            values = {last: sympy.Poly(last, last, modulus=p)}
            for var in gens[:-1]:
                solved = _solved_coordinate(fiber.exprs, var, last, p)
                if solved is None:
                    break
                values[var] = solved.rem(g)
            else:
                coords = [values[v] if v in values else sympy.Poly(fixed[v], last, modulus=p) for v in _X]
                substitution = {v: c.as_expr() for v, c in zip(_X, coords)}
                if all(sympy.Poly(sympy.expand(e.subs(substitution, simultaneous=True)), last, modulus=p)
                       .rem(g).is_zero for e in generators):
                    if g.degree() > 3:
                        logger.warning(f"singular point of {form} mod {p} needs degree {g.degree()} over F_{p}")
                    return ExtensionWitness(
                        p=p,
                        degree=g.degree(),
                        modulus=_residues(g, p),
                        coordinates=tuple(_residues(c, p) for c in coords),
                    )
    return None


def reduce_point_mod_p(point: ProjPoint, p: int) -> ProjPoint:
    if point.p is not None:
        raise FieldMismatchError(f"{point} is already a point over F_{point.p}")
    return ProjPoint(point.coords, p)


def _search_key(point: ProjPoint):
    leading = next(i for i, c in enumerate(point.coords) if c)
    return height(point), leading, tuple((abs(c), c < 0) for c in point.coords)


def _rational_singular_point(form: CubicForm, height_bound: int) -> Optional[ProjPoint]:
    span = range(-height_bound, height_bound + 1)
    candidates = []
    for raw in product(span, repeat=3):
        if not any(raw) or gcd(*raw) != 1 or next(c for c in raw if c) < 0:
            continue
        if _is_singular(form.coefficients, raw):
            candidates.append(ProjPoint(raw))
    return min(candidates, key=_search_key, default=None)


def smoothness_verdict(form: CubicForm,
                       prime_budget: int = DEFAULT_OPTIONS["SMOOTHNESS_PRIME_BUDGET"],
                       first_prime: int = DEFAULT_OPTIONS["SMOOTHNESS_FIRST_PRIME"],
                       search_height: int = DEFAULT_OPTIONS["SINGULAR_SEARCH_HEIGHT"]) -> SmoothnessVerdict:
    """
    Certify smoothness by one prime of good reduction, or singularity by a rational
    singular point. Neither found within the budget gives Undetermined.
    """
    tried = []
    p = first_prime if sympy.isprime(first_prime) else next_prime(first_prime)
    for _ in range(prime_budget):
        tried.append(p)
        if good_reduction(form, p):
            logger.debug(f"{form} certified smooth by its reduction at {p}")
            return SmoothnessVerdict(kind="SmoothCertified", witness_prime=p, primes_tried=tried)
        p = next_prime(p)

    singular = _rational_singular_point(form, search_height)
    if singular is not None:
        return SmoothnessVerdict(kind="SingularCertified", singular_point=singular.coords, primes_tried=tried)
    return SmoothnessVerdict(
        kind="Undetermined",
        primes_tried=tried,
        note=f"bad reduction at every tried prime and no singular point of height <= {search_height}",
    )


def _enumeration_sieve(coeffs: Sequence[int], bound: int):
    """Primes whose product exceeds 2B + 1, with root tables of the residual cubic"""
    moduli, modulus, ell = [], 1, 2
    while modulus <= 2 * bound + 1:
        moduli.append(ell)
        modulus *= ell
        ell = next_prime(ell)
    tables = []
    for ell in moduli:
        table = []
        for u, v in product(range(ell), repeat=2):
            a0, a1, a2, a3 = _residual_in_x2(coeffs, u, v)
            table.append(tuple(t for t in range(ell) if (((a3 * t + a2) * t + a1) * t + a0) % ell == 0))
        tables.append(table)
    weights = [(modulus // ell) * pow(modulus // ell, -1, ell) for ell in moduli]
    return moduli, tables, weights, modulus


def _sweep_rows(coeffs: Sequence[int], bound: int, x0_values: Iterable[int], sieve) -> List[ProjPoint]:
    moduli, tables, weights, modulus = sieve
    found = []
    for x0 in x0_values:
        offsets = [(x0 % ell) * ell for ell in moduli]
        for x1 in (range(-bound, bound + 1) if x0 else range(1, bound + 1)):
            residues = []
            for ell, table, offset in zip(moduli, tables, offsets):
                roots = table[offset + x1 % ell]
                if not roots:
                    break
                residues.append(roots)
            else:
                a0, a1, a2, a3 = _residual_in_x2(coeffs, x0, x1)
                if not (a0 or a1 or a2 or a3):
                    raise CurveError(f"The line through [{x0}:{x1}:0] and [0:0:1] lies on the curve")
                content = gcd(x0, x1)
                for combo in product(*residues):
                    t = sum(r * w for r, w in zip(combo, weights)) % modulus
                    if t > bound:
                        t -= modulus
                    if t < -bound:
                        continue
                    if ((a3 * t + a2) * t + a1) * t + a0 == 0 and gcd(content, t) == 1:
                        found.append(ProjPoint((x0, x1, t)))
    return found


def enumerate_rational_points(form: CubicForm, bound: int, workers: int = 1) -> List[ProjPoint]:
    """
    All rational points of height <= bound, sorted.

    Sweeps (x0, x1) and solves the cubic in x2; candidate x2 values come from a CRT
    sieve over small primes, then each candidate is checked exactly.
    """
    if bound < 1:
        raise CurveError(f"Height bound must be at least 1, got {bound}")
    coeffs = form.coefficients
    sieve = _enumeration_sieve(coeffs, bound)
    rows = list(range(bound + 1))
    if workers > 1:
        chunks = [rows[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda chunk: _sweep_rows(coeffs, bound, chunk, sieve), chunks)
            found = [P for part in parts for P in part]
    else:
        found = _sweep_rows(coeffs, bound, rows, sieve)
    if coeffs[9] == 0:
        found.append(ProjPoint((0, 0, 1)))
    found = sorted(set(found))
    logger.debug(f"N({bound}) = {len(found)} for {form}")
    return found


def reduction_profile(form: CubicForm,
                      prime_bound: int = DEFAULT_OPTIONS["PRIME_SCAN_BOUND"],
                      workers: int = 1) -> ReductionProfile:
    """Bad primes up to prime_bound; pi_c is therefore a certified factor of the true product."""
    primes = primes_up_to(prime_bound)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(lambda q: good_reduction(form, q), primes))
    else:
        verdicts = [good_reduction(form, q) for q in primes]
    bad = [q for q, good in zip(primes, verdicts) if not good]

    witnesses, extension_witnesses = {}, {}
    for q in bad:
        singular = singular_points_mod_p(form, q)
        if singular:
            witnesses[q] = singular[0].coords
            continue
        logger.debug(f"singular locus of {form} mod {q} has no F_{q}-rational point")
        lifted = extension_singular_point(form, q)
        if lifted is None:
            logger.warning(f"⚠️ {q} is bad for {form} but no singular point was solved for over an extension")
            continue
        extension_witnesses[q] = lifted

    pi_c = 1
    for q in bad:
        pi_c *= q
    return ReductionProfile(
        curve=form.summary(),
        scan_bound=prime_bound,
        bad_primes=bad,
        witnesses=witnesses,
        pi_c=pi_c,
        log_pi_c=float(log(mp.mpf(pi_c))),
        extension_witnesses=extension_witnesses,
    )
