import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf, log, fsum

from src.constants import DEFAULT_OPTIONS, RANK_PROVENANCE
from src.helpers.cubic.arith import (
    ExactMatrix,
    det_exact,
    next_prime,
    pivot_columns,
    primes_up_to,
    rank_nullspace,
    valuation,
)
from src.helpers.cubic.bounds import (
    basis_condition,
    inequality_5,
    inequality_7,
    inequality_8,
    parameter_choice,
)
from src.helpers.cubic.curve import (
    CubicForm,
    ProjPoint,
    count_points_fp,
    enumerate_rational_points,
    good_reduction,
    height,
    points_mod_p,
    reduce_point_mod_p,
)
from src.helpers.cubic.descent import (
    XPair,
    build_x_points,
    default_seeds,
    estimate_height_exponent,
    pairs_in_height_box,
    search_set,
)
from src.helpers.cubic.errors import (
    BadReductionError,
    BasisDeficiencyError,
    BoundInputError,
    CubicError,
    NonvanishingInconclusiveError,
    SampleExhaustionError,
)
from src.helpers.cubic.group import GroupContext
from src.types import (
    AuxiliaryForm,
    DivisibilityCertificate,
    ExperimentConfig,
    ExperimentReport,
    GlobalFactorReport,
    MinorCertificate,
)

logger = logging.getLogger("helpers.cubic.detmethod")


def _monomial_text(prefix: str, exponents: Tuple[int, int, int]) -> List[str]:
    return [f"{prefix}{i}" if e == 1 else f"{prefix}{i}^{e}" for i, e in enumerate(exponents) if e]


@dataclass(frozen=True, order=True)
class BiMonomial:
    """x0^e0 x1^e1 x2^e2 y0^f0 y1^f1 y2^f2 of bidegree (sum e, sum f)"""
    x: Tuple[int, int, int]
    y: Tuple[int, int, int]

    @property
    def bidegree(self) -> Tuple[int, int]:
        return sum(self.x), sum(self.y)

    def evaluate(self, P: Sequence[int], Q: Sequence[int]) -> int:
        value = 1
        for base, e in zip(P, self.x):
            if e:
                value *= base ** e
        for base, f in zip(Q, self.y):
            if f:
                value *= base ** f
        return value

    def __str__(self):
        return "*".join(_monomial_text("x", self.x) + _monomial_text("y", self.y)) or "1"


def _exponents_of_degree(d: int) -> List[Tuple[int, int, int]]:
    return [(e0, e1, d - e0 - e1) for e0 in range(d, -1, -1) for e1 in range(d - e0, -1, -1)]


def all_bimonomials(a: int, b: int) -> List[BiMonomial]:
    """Every monomial of bidegree (a, b), deglex in the x exponents then the y exponents"""
    if a < 0 or b < 0:
        raise BoundInputError(f"Bidegree must be nonnegative, got ({a}, {b})")
    return [BiMonomial(e, f) for e in _exponents_of_degree(a) for f in _exponents_of_degree(b)]


@dataclass(frozen=True)
class MonomialBasis:
    a: int
    b: int
    m: int
    monomials: Tuple[BiMonomial, ...]
    q: int
    certified_rank: int
    basis_condition: bool
    samples: Tuple[XPair, ...] = field(default=(), compare=False, repr=False)

    @property
    def s(self) -> int:
        return len(self.monomials)

    @property
    def target(self) -> int:
        return 3 * (self.m * self.m * self.a + self.b)


@dataclass
class BlockPartition:
    """Row indices grouped by the reduction of Q_j mod p"""
    p: int
    blocks: Dict[ProjPoint, List[int]]

    @property
    def sizes(self) -> List[int]:
        return [len(rows) for rows in self.blocks.values()]

    @property
    def exponent(self) -> int:
        return sum(size * (size - 1) // 2 for size in self.sizes)


def smallest_good_prime(form: CubicForm, above: int) -> int:
    q = next_prime(above)
    while not good_reduction(form, q):
        q = next_prime(q)
    return q


def x_samples(form: CubicForm, R: ProjPoint, m: int, q: int, seed: int = 0) -> List[XPair]:
    """X(F_q) points (m*Q - (m-1)*R, Q) over a shuffled C(F_q)"""
    if not good_reduction(form, q):
        raise BadReductionError(f"Sample prime {q} has bad reduction")
    curve_points = points_mod_p(form, q)
    random.Random(seed).shuffle(curve_points)
    return build_x_points(form, reduce_point_mod_p(R, q), m, curve_points)


def select_independent_monomials(form: CubicForm, R: ProjPoint, m: int, a: int, b: int,
                                 q: Optional[int] = None, seed: int = 0,
                                 retries: int = DEFAULT_OPTIONS["SAMPLE_PRIME_RETRIES"],
                                 start: int = DEFAULT_OPTIONS["SAMPLE_PRIME_START"]) -> MonomialBasis:
    """
    Greedily pick monomials whose values on X(F_q) are linearly independent over F_q.

    Independence over F_q implies independence of the cosets over Q. The target is
    s = 3(m^2 a + b); a shortfall retries with a larger q before giving up.
    """
    if a < 1 or b < m * m:
        raise BoundInputError(f"Need a >= 1 and b >= m^2, got (a, b) = ({a}, {b}) with m = {m}")
    target = 3 * (m * m * a + b)
    candidates = all_bimonomials(a, b)
    q = q or smallest_good_prime(form, start)

    shortfall = None
    for _ in range(retries + 1):
        samples = x_samples(form, R, m, q, seed)
        if len(samples) < 2 * target:
            logger.warning(f"⚠️ Only {len(samples)} X(F_{q}) samples for s = {target}, enlarging q")
            q = smallest_good_prime(form, 2 * q)
            continue

        echelon: List[Tuple[int, List[int]]] = []
        chosen = []
        for monomial in candidates:
            vector = [monomial.evaluate(pair.P.coords, pair.Q.coords) % q for pair in samples]
            for pivot, row in echelon:
                factor = vector[pivot]
                if factor:
                    vector = [(v - factor * r) % q for v, r in zip(vector, row)]
            pivot = next((i for i, v in enumerate(vector) if v), None)
            if pivot is None:
                continue
            inverse = pow(vector[pivot], -1, q)
            echelon.append((pivot, [v * inverse % q for v in vector]))
            chosen.append(monomial)
            if len(chosen) == target:
                break

        if len(chosen) == target:
            logger.debug(f"{target} independent monomials of bidegree ({a}, {b}) certified mod {q}")
            return MonomialBasis(a, b, m, tuple(chosen), q, len(chosen), basis_condition(a, b, m), tuple(samples))
        shortfall = len(chosen)
        logger.warning(f"⚠️ Certified {shortfall} of {target} monomials mod {q}, enlarging q")
        q = smallest_good_prime(form, 2 * q)

    if shortfall is not None:
        raise BasisDeficiencyError(f"Certified {shortfall} of s = {target} monomials after {retries} retries")
    raise SampleExhaustionError(f"Not enough X(F_q) samples for s = {target} after {retries} retries")


def build_matrix(pairs: Sequence[XPair], basis: MonomialBasis,
                 row_ids: Optional[Sequence[int]] = None) -> ExactMatrix:
    """N x s matrix of basis monomials at the primitive representatives of each pair"""
    row_ids = list(row_ids) if row_ids is not None else list(range(len(pairs)))
    rows = [[monomial.evaluate(pair.P.coords, pair.Q.coords) for monomial in basis.monomials] for pair in pairs]
    return ExactMatrix.from_rows(
        rows,
        row_labels=[f"pair{j}" for j in row_ids],
        col_labels=[str(monomial) for monomial in basis.monomials],
        cols=len(basis.monomials),
    )


def congruence_blocks(form: CubicForm, pairs: Sequence[XPair], p: int) -> BlockPartition:
    if not good_reduction(form, p):
        raise BadReductionError(f"Congruence blocks need a good prime, {p} is bad")
    blocks: Dict[ProjPoint, List[int]] = {}
    for j, pair in enumerate(pairs):
        blocks.setdefault(reduce_point_mod_p(pair.Q, p), []).append(j)
    return BlockPartition(p, dict(sorted(blocks.items())))


def lemma5_certificate(delta_star: ExactMatrix, p: int, E: int) -> bool:
    """p^(E(E-1)/2) divides det(delta_star); a vanishing determinant passes"""
    det = det_exact(delta_star)
    if det == 0:
        return True
    return valuation(int(det), p) >= E * (E - 1) // 2


def _square_columns(matrix: ExactMatrix, k: int) -> List[int]:
    """k column indices, independent ones first, padded in order"""
    columns = pivot_columns(matrix)[:k]
    for j in range(matrix.cols):
        if len(columns) >= k:
            break
        if j not in columns:
            columns.append(j)
    return sorted(columns)


def lemma6_certificate(delta: ExactMatrix, blocks: BlockPartition, p: int,
                       n_p: Optional[int] = None, determinant: Optional[int] = None) -> DivisibilityCertificate:
    """p^(N_p) divides det(delta) where N_p sums s_P(s_P - 1)/2 over the blocks"""
    det = int(det_exact(delta)) if determinant is None else determinant
    exponent = blocks.exponent
    comparison = delta.rows ** 2 / (2 * n_p) if n_p else None
    if det == 0:
        return DivisibilityCertificate(p=p, N_p=exponent, block_sizes=blocks.sizes, verified=True,
                                       status="vanishing determinant", n_p=n_p, comparison=comparison)
    v = valuation(det, p)
    verified = v >= exponent
    if not verified:
        logger.error(f"❌ v_{p}(det) = {v} < N_p = {exponent}")
    return DivisibilityCertificate(p=p, N_p=exponent, block_sizes=blocks.sizes, verified=verified,
                                   status="verified" if verified else "violated", valuation=v, n_p=n_p,
                                   comparison=comparison)


def global_factor(form: CubicForm, delta: ExactMatrix, pairs: Sequence[XPair], prime_limit: int,
                  B: Optional[int] = None, determinant: Optional[int] = None) -> GlobalFactorReport:
    """
    T = product over good p <= prime_limit of p^(N_p), a certified factor of det(delta).

    Rows of delta must correspond to pairs in order.
    """
    det = int(det_exact(delta)) if determinant is None else determinant
    certificates, T = [], 1
    estimate_terms = []
    for p in primes_up_to(prime_limit):
        if not good_reduction(form, p):
            continue
        n_p = count_points_fp(form, p)
        certificate = lemma6_certificate(delta, congruence_blocks(form, pairs, p), p, n_p, det)
        certificates.append(certificate)
        T *= p ** certificate.N_p
        estimate_terms.append((p, n_p))

    s = delta.rows
    with mp.workdps(DEFAULT_OPTIONS["PRECISION_DPS"]):
        log_t = float(log(mpf(T)))
        estimate = float(mpf(s) ** 2 / 2 * fsum(log(mpf(p)) / n_p for p, n_p in estimate_terms))
        target = None
        if B is not None and B >= 3:
            target = float(mpf(s) ** 2 / 2 * log(mpf(s) / log(mpf(B)))) if s else None
    return GlobalFactorReport(
        T=T,
        log_T=log_t,
        prime_limit=prime_limit,
        certificates=certificates,
        determinant_vanishes=det == 0,
        divides_determinant=None if det == 0 else det % T == 0,
        good_prime_estimate=estimate,
        target=target,
    )


def evaluate_auxiliary(coefficients: Sequence[int], basis: MonomialBasis,
                       P: Sequence[int], Q: Sequence[int]) -> int:
    return sum(c * monomial.evaluate(P, Q) for c, monomial in zip(coefficients, basis.monomials) if c)


def find_auxiliary_form(pairs: Sequence[XPair], basis: MonomialBasis) -> Optional[AuxiliaryForm]:
    """
    A primitive G = sum c_i F_i vanishing at every pair, present exactly when rank(M) < s.

    G is re-evaluated at each pair and shown not to vanish on X at some X(F_q) sample.
    """
    rank, nullspace = rank_nullspace(build_matrix(pairs, basis))
    if rank == basis.s:
        return None
    coefficients = list(nullspace[0])
    vanishes = all(evaluate_auxiliary(coefficients, basis, pair.P.coords, pair.Q.coords) == 0 for pair in pairs)
    for sample in basis.samples:
        if evaluate_auxiliary(coefficients, basis, sample.P.coords, sample.Q.coords) % basis.q:
            return AuxiliaryForm(
                coefficients=coefficients,
                monomials=[str(monomial) for monomial in basis.monomials],
                vanishes_on_pairs=vanishes,
                sample_prime=basis.q,
                nonvanishing_sample=(sample.P.coords, sample.Q.coords),
            )
    raise NonvanishingInconclusiveError(f"G vanishes at all {len(basis.samples)} X(F_{basis.q}) samples")


def bezout_count_check(pairs: Sequence[XPair], G: Optional[AuxiliaryForm], a: int, b: int, m: int) -> bool:
    """Distinct pairs on X and Y number at most 3(m^2 a + b)"""
    distinct = {(pair.P, pair.Q) for pair in pairs}
    return len(distinct) <= 3 * (m * m * a + b)


def _collect_pairs(form: CubicForm, R: ProjPoint, m: int, B: int, points: List[ProjPoint],
                   config: ExperimentConfig) -> Tuple[List[XPair], List[XPair]]:
    """
    (pairs with H(P) <= B, every constructed pair) in deterministic order.

    Every pair found in the height box is kept; pair_cap only limits the pairs built from seeds.
    """
    ctx = GroupContext(form, R)
    if m == 1:
        boxed = pairs_in_height_box(form, R, m, points, B, points)
        return boxed, boxed
    candidates = search_set(ctx, points, config.search_radius)
    boxed = pairs_in_height_box(form, R, m, points, B, candidates)
    built = build_x_points(form, R, m, default_seeds(ctx, points, config.seed_count), config.pair_cap)
    merged = list(boxed)
    for pair in built:
        if height(pair.P) <= B and pair not in merged:
            merged.append(pair)
    return merged, boxed + built


def run_experiment(form: CubicForm, R: ProjPoint, m: int, B: int,
                   config: Optional[ExperimentConfig] = None) -> ExperimentReport:
    """
    Enumerate points, build X-pairs, pick (a, b = m^2, s), certify a basis, then either
    extract the auxiliary form G or certify the determinant's p-adic factors.
    """
    config = config or ExperimentConfig()
    errors, notes = [], []

    points = enumerate_rational_points(form, B, config.workers)
    pairs, constructed = _collect_pairs(form, R, m, B, points, config)
    logger.debug(f"{len(points)} points of height <= {B}, {len(pairs)} pairs")

    if config.A is not None:
        A, A_source = config.A, "config"
    elif constructed:
        A, A_source = estimate_height_exponent(constructed).suggested_A, "empirical estimate rounded up"
    else:
        A, A_source = 1, "default, no pairs to estimate from"

    chosen = parameter_choice(B, m, A, config.u)
    b = m * m
    if config.use_chosen_parameters:
        a = chosen.a
        if chosen.s > config.max_basis_size:
            raise BoundInputError(f"Chosen parameters give s = {chosen.s} above max_basis_size = {config.max_basis_size}")
    else:
        a = config.a
        notes.append(f"bidegree a = {a} from config; the parameter choice a = {chosen.a} gives s = {chosen.s}")
    basis = select_independent_monomials(form, R, m, a, b, config.q, config.seed)
    s = basis.s

    matrix = build_matrix(pairs, basis)
    matrix_rank, _ = rank_nullspace(matrix)
    N = len(pairs)
    scarcity = N < s
    if scarcity:
        notes.append(f"N = {N} < s = {s}: rank(M) < s follows from scarcity alone")

    prime_limit = config.prime_limit or s
    if N >= s:
        if config.all_minors and N - s <= DEFAULT_OPTIONS["ALL_MINORS_SLACK"]:
            row_sets = [list(rows) for rows in combinations(range(N), s)]
        else:
            row_sets = [list(range(s))]
        column_sets = [list(range(s))] * len(row_sets)
    else:
        row_sets = [list(range(N))] if N else []
        column_sets = [_square_columns(matrix, N)] if N else []

    minors = []
    for rows, columns in zip(row_sets, column_sets):
        delta = matrix.submatrix(rows, columns)
        minor_pairs = [pairs[i] for i in rows]
        det = int(det_exact(delta))
        report = global_factor(form, delta, minor_pairs, prime_limit, B, det)
        lemma5_ok = True
        for p in primes_up_to(prime_limit):
            if not good_reduction(form, p):
                continue
            for block_rows in congruence_blocks(form, minor_pairs, p).blocks.values():
                E = len(block_rows)
                if E < 2:
                    continue
                block = delta.submatrix(block_rows, range(delta.cols))
                delta_star = block.submatrix(range(E), _square_columns(block, E))
                lemma5_ok = lemma5_ok and lemma5_certificate(delta_star, p, E)
        if not lemma5_ok or not all(c.verified for c in report.certificates):
            errors.append(f"divisibility certificate violated for rows {rows}")
        minors.append(MinorCertificate(rows=rows, determinant=det, global_factor=report,
                                       lemma5_blocks_verified=lemma5_ok))

    auxiliary, bezout = None, None
    if matrix_rank < s:
        try:
            auxiliary = find_auxiliary_form(pairs, basis)
            bezout = bezout_count_check(pairs, auxiliary, a, b, m)
        except CubicError as e:
            errors.append(f"{type(e).__name__}: {e}")

    ineq5 = ineq7 = None
    if minors and N >= s:
        first = minors[0]
        if first.determinant != 0:
            ineq5 = inequality_5(first.determinant, s, a, b, A, B)
            ineq7 = inequality_7(first.global_factor.log_T, s, B)

    return ExperimentReport(
        curve=form.summary(),
        m=m,
        B=B,
        R=R.coords,
        rank_provenance=RANK_PROVENANCE,
        a=a,
        b=b,
        s=s,
        basis_condition=basis.basis_condition,
        parameter_choice=chosen,
        A=A,
        A_source=A_source,
        u=config.u,
        basis_monomials=[str(monomial) for monomial in basis.monomials],
        sample_prime=basis.q,
        points_found=len(points),
        pairs=[(pair.P.coords, pair.Q.coords) for pair in pairs],
        pair_count=N,
        matrix_rank=matrix_rank,
        scarcity_forced=scarcity,
        minors=minors,
        auxiliary_form=auxiliary,
        bezout_bound=3 * (m * m * a + b),
        bezout_holds=bezout,
        inequality_5=ineq5,
        inequality_7=ineq7,
        inequality_8=inequality_8(B, a, b, s, A, config.u),
        errors=errors,
        notes=notes,
    )
