import logging
from fractions import Fraction
from math import floor
from typing import Callable, List, Optional, Sequence, Tuple, Union

import sympy
from mpmath import mp, mpf, log, sqrt, nint, fsum

from src.constants import DEFAULT_OPTIONS, LEMMA4_NORM_EXPONENT, LEMMA4_POINT_THRESHOLD, MAZUR_TORSION_BOUND, \
    THEOREM9_RANK_THRESHOLD
from src.helpers.cubic.arith import primes_up_to
from src.helpers.cubic.curve import CubicForm, coefficient_norm, enumerate_rational_points, reduction_profile
from src.helpers.cubic.errors import BoundInputError
from src.types import (
    ComparisonBounds,
    GrowthRow,
    InequalityDiagnostic,
    Lemma8Check,
    Lemma8Sweep,
    MertensDiagnostics,
    ParameterChoice,
    ReductionDiagnostics,
    ReductionProfile,
    Theorem1Bound,
    Theorem9Report,
)

logger = logging.getLogger("helpers.cubic.bounds")

PRECISION = DEFAULT_OPTIONS["PRECISION_DPS"]
TOLERANCE = DEFAULT_OPTIONS["RELATIVE_TOLERANCE"]
Real = Union[int, float, Fraction, mpf]


def _mp(value: Real) -> mpf:
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    return mpf(value)


def _require_height_bound(B: Real):
    if _mp(B) < 3:
        raise BoundInputError(f"Bounds hold for B >= 3, got {B}")


def _decide(compute: Callable[[], Tuple[mpf, mpf]], holds: Callable[[mpf, mpf], bool],
            precision: int) -> InequalityDiagnostic:
    """Evaluate both sides; a near tie is re-run at doubled precision before deciding."""
    with mp.workdps(precision):
        lhs, rhs = compute()
        tie = abs(lhs - rhs) <= TOLERANCE * max(abs(rhs), 1)
    if tie:
        logger.warning(f"⚠️ Near tie {lhs} vs {rhs}, re-evaluating at {2 * precision} digits")
        with mp.workdps(2 * precision):
            lhs, rhs = compute()
    return InequalityDiagnostic(lhs=float(lhs), rhs=float(rhs), holds=bool(holds(lhs, rhs)))


def theorem1_bound(B: int, r: int, m: int, precision: int = PRECISION) -> Theorem1Bound:
    """m^r (B^(2/(3m^2)) + m^2) log B, natural logarithm"""
    _require_height_bound(B)
    if r < 0 or m < 1:
        raise BoundInputError(f"Need r >= 0 and m >= 1, got r = {r}, m = {m}")
    exponent = Fraction(2, 3 * m * m)
    with mp.workdps(precision):
        log_b = log(_mp(B))
        value = mpf(m) ** r * (_mp(B) ** _mp(exponent) + m * m) * log_b
        return Theorem1Bound(B=B, r=r, m=m, value=float(value), m_power=m ** r, exponent=str(exponent),
                             log_B=float(log_b))


def optimal_m(B: Real, precision: int = PRECISION) -> int:
    """1 + floor(sqrt(log B)), snapping values within tolerance of an integer"""
    _require_height_bound(B)
    with mp.workdps(precision):
        root = sqrt(log(_mp(B)))
        nearest = nint(root)
        if abs(root - nearest) <= TOLERANCE * max(root, 1):
            return 1 + int(nearest)
        return 1 + int(floor(root))


def inequality_8(B: int, a: int, b: int, s: int, A: Real, u: Real,
                 precision: int = PRECISION) -> InequalityDiagnostic:
    """s > u B^(2(a + Ab)/s) log B"""
    def compute():
        exponent = 2 * (a + _mp(A) * b) / s
        return mpf(s), _mp(u) * _mp(B) ** exponent * log(_mp(B))
    return _decide(compute, lambda lhs, rhs: lhs > rhs, precision)


def inequality_5(det: int, s: int, a: int, b: int, A: Real, B: int,
                 precision: int = PRECISION) -> InequalityDiagnostic:
    """log |det| <= s log s + s log B^(a + Ab)"""
    if det == 0:
        raise BoundInputError("log |det| is undefined for a vanishing determinant")

    def compute():
        return log(mpf(abs(det))), s * log(mpf(s)) + s * (a + _mp(A) * b) * log(_mp(B))
    return _decide(compute, lambda lhs, rhs: lhs <= rhs, precision)


def inequality_7(log_t: Real, s: int, B: int, precision: int = PRECISION) -> InequalityDiagnostic:
    """log T >= (s^2 / 2) log(s / log B), with no implicit constant"""
    def compute():
        return _mp(log_t), mpf(s) ** 2 / 2 * log(mpf(s) / log(_mp(B)))
    return _decide(compute, lambda lhs, rhs: lhs >= rhs, precision)


def basis_condition(a: int, b: int, m: int) -> bool:
    """1/a + m^2/b < 3, under which the basis has s = 3(m^2 a + b) elements"""
    if a < 1 or b < 1:
        return False
    return Fraction(1, a) + Fraction(m * m, b) < 3


def parameter_choice(B: int, m: int, A: Real, u: Real = 1, precision: int = PRECISION) -> ParameterChoice:
    """b = m^2 and a = 1 + floor(u B^(2/(3m^2)) log B / m^2 + A log B)"""
    _require_height_bound(B)
    if m < 1:
        raise BoundInputError(f"m must be a positive integer, got {m}")
    b = m * m
    with mp.workdps(precision):
        log_b = log(_mp(B))
        growth = _mp(u) * _mp(B) ** (mpf(2) / (3 * m * m)) * log_b / (m * m) + _mp(A) * log_b
        a = 1 + int(floor(growth))
    s = 3 * (m * m * a + b)
    return ParameterChoice(a=a, b=b, s=s, inequality_8=inequality_8(B, a, b, s, A, u, precision))


def mertens_diagnostics(s: int, precision: int = PRECISION) -> MertensDiagnostics:
    if s < 2:
        raise BoundInputError(f"Mertens sums need s >= 2, got {s}")
    primes = primes_up_to(s)
    with mp.workdps(precision):
        logs = [log(mpf(p)) for p in primes]
        weighted = fsum(lp / p for lp, p in zip(logs, primes))
        chebyshev = fsum(logs)
        log_s = log(mpf(s))
        return MertensDiagnostics(
            s=s,
            sum_log_p_over_p=float(weighted),
            log_s=float(log_s),
            sum_log_p=float(chebyshev),
            deviation=float(abs(weighted - log_s)),
            chebyshev_ratio=float(chebyshev / s),
        )


def lemma8_check(pi: int, precision: int = PRECISION) -> Lemma8Check:
    """sum over p | pi of log p / p <= log log pi + 2"""
    if pi <= 1:
        raise BoundInputError(f"Lemma 8 needs an integer > 1, got {pi}")
    divisors = [int(p) for p in sympy.primefactors(pi)]

    def compute():
        return fsum(log(mpf(p)) / p for p in divisors), log(log(mpf(pi))) + 2
    verdict = _decide(compute, lambda lhs, rhs: lhs <= rhs, precision)
    return Lemma8Check(pi=pi, prime_divisors=divisors, lhs=verdict.lhs, rhs=verdict.rhs, holds=verdict.holds)


def lemma8_sweep(limit: int) -> Lemma8Sweep:
    """Lemma 8 for every square-free integer in [2, limit], by a sieve"""
    if limit < 2:
        raise BoundInputError(f"Sweep limit must be at least 2, got {limit}")
    lhs = [0.0] * (limit + 1)
    square_free = [True] * (limit + 1)
    for p in primes_up_to(limit):
        weight = float(log(mpf(p)) / p)
        for n in range(p, limit + 1, p):
            lhs[n] += weight
        for n in range(p * p, limit + 1, p * p):
            square_free[n] = False

    checked, failures = 0, []
    smallest, smallest_at = None, 2
    for n in range(2, limit + 1):
        if not square_free[n]:
            continue
        checked += 1
        margin = float(log(log(mpf(n)))) + 2 - lhs[n]
        if margin < 0:
            failures.append(n)
        if smallest is None or margin < smallest:
            smallest, smallest_at = margin, n
    return Lemma8Sweep(limit=limit, checked=checked, failures=failures, smallest_margin=smallest,
                       smallest_margin_at=smallest_at)


def theorem9_m(l: int) -> Fraction:
    return Fraction(l * l - 4 * l - 4, 8 * l * l + 8 * l)


def theorem9_exponent(r: int) -> Theorem9Report:
    """Exponent of log B: r/2 - (m_1 + ... + m_r) below rank 16, r/2 from there on"""
    if r < 1:
        raise BoundInputError(f"Rank must be positive, got {r}")
    length = max(r, THEOREM9_RANK_THRESHOLD)
    values = [theorem9_m(l) for l in range(1, length + 1)]
    partial, running = [], Fraction(0)
    for value in values:
        running += value
        partial.append(running)
    half_rank = Fraction(r, 2)
    exponent = half_rank - partial[r - 1] if r < THEOREM9_RANK_THRESHOLD else half_rank
    return Theorem9Report(
        r=r,
        m_values=[str(v) for v in values],
        partial_sums=[str(v) for v in partial],
        exponent=str(exponent),
        corollary_bound=str(1 + half_rank),
        corollary_holds=exponent <= 1 + half_rank,
    )


def bad_prime_sum_diagnostic(pi_c: int, B: int, precision: int = PRECISION) -> Tuple[float, float]:
    """(sum over p | pi_c of log p / p, log log B)"""
    _require_height_bound(B)
    with mp.workdps(precision):
        divisors = sympy.primefactors(pi_c) if pi_c > 1 else []
        total = fsum(log(mpf(int(p))) / int(p) for p in divisors)
        return float(total), float(log(log(_mp(B))))


def reduction_diagnostics(form: CubicForm, B: int, n_observed: int,
                          profile: Optional[ReductionProfile] = None,
                          scan_bound: int = DEFAULT_OPTIONS["PRIME_SCAN_BOUND"],
                          precision: int = PRECISION) -> ReductionDiagnostics:
    """Coefficient-size and bad-prime ratios against log B; reported, never asserted"""
    _require_height_bound(B)
    profile = profile or reduction_profile(form, scan_bound)
    norm = coefficient_norm(form)
    bad_sum, log_log_b = bad_prime_sum_diagnostic(profile.pi_c, B, precision)
    with mp.workdps(precision):
        log_b = log(_mp(B))
        return ReductionDiagnostics(
            B=B,
            coefficient_norm=norm,
            norm_ratio=float(log(mpf(norm)) / (LEMMA4_NORM_EXPONENT * log_b)),
            pi_c=profile.pi_c,
            scan_bound=profile.scan_bound,
            bad_prime_ratio=float(log(mpf(profile.pi_c)) / log_b),
            bad_prime_sum=bad_sum,
            log_log_B=log_log_b,
            n_observed=n_observed,
            at_most_nine=n_observed <= LEMMA4_POINT_THRESHOLD,
        )


def comparison_bounds(B: int, r: int, m: int, precision: int = PRECISION) -> ComparisonBounds:
    """Theorem 1 next to the earlier estimate m^(r+2) (B^(2/(3m^2)) log B + log^2 B)"""
    current = theorem1_bound(B, r, m, precision)
    with mp.workdps(precision):
        log_b = log(_mp(B))
        earlier = mpf(m) ** (r + 2) * (_mp(B) ** (mpf(2) / (3 * m * m)) * log_b + log_b ** 2)
    ladder = {
        "earlier_log_power": str(Fraction(6 + r, 2)),
        "corollary_log_power": str(Fraction(4 + r, 2)),
        "large_rank_log_power": str(Fraction(2 + r, 2)),
    }
    if r >= 1:
        ladder["theorem9_log_power"] = theorem9_exponent(r).exponent
    return ComparisonBounds(
        B=B,
        r=r,
        m=m,
        theorem1=current.value,
        earlier_estimate=float(earlier),
        exponent_ladder=ladder,
        torsion_cap=MAZUR_TORSION_BOUND if r == 0 else None,
    )


def growth_table(form: CubicForm, grid: Sequence[int], r: int, workers: int = 1,
                 precision: int = PRECISION) -> List[GrowthRow]:
    """N(B) next to Theorem 1 at the optimal m and (log B)^(2 + r/2), one row per B"""
    rows = []
    for B in grid:
        _require_height_bound(B)
        m = optimal_m(B, precision)
        count = len(enumerate_rational_points(form, B, workers))
        with mp.workdps(precision):
            power = log(_mp(B)) ** (2 + mpf(r) / 2)
        rows.append(GrowthRow(B=B, N=count, m=m, theorem1_bound=theorem1_bound(B, r, m, precision).value,
                              log_power=float(power)))
    return rows
