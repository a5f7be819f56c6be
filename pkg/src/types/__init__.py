from typing import Annotated, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer

# Big integers travel as decimal strings in JSON to avoid precision loss downstream
BigInt = Annotated[int, PlainSerializer(lambda v: str(v), return_type=str, when_used="json")]
Point = Tuple[BigInt, BigInt, BigInt]


class BaseModelWithArbitraryTypes(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)


class CurveSummary(BaseModelWithArbitraryTypes):
    name: Optional[str] = None
    coefficients: List[BigInt]


class SmoothnessVerdict(BaseModelWithArbitraryTypes):
    """Outcome of the smoothness certification of a cubic form."""
    kind: Literal["SmoothCertified", "SingularCertified", "Undetermined"]
    witness_prime: Optional[int] = None
    singular_point: Optional[Point] = None
    primes_tried: List[int] = []
    note: Optional[str] = None

    @property
    def is_smooth(self) -> bool:
        return self.kind == "SmoothCertified"


class ExtensionWitness(BaseModelWithArbitraryTypes):
    """
    A singular point of the reduction defined over F_p[t]/(modulus).

    modulus is monic and irreducible over F_p; each coordinate is a polynomial in t.
    All coefficient lists run from the highest degree down, reduced into [0, p).
    """
    p: int
    degree: int
    modulus: List[int]
    coordinates: Tuple[List[int], List[int], List[int]]


class ReductionProfile(BaseModelWithArbitraryTypes):
    """
    Scan-limited bad-reduction data; pi_c is a certified factor of the true product.

    Every bad prime carries a singular point: an F_p-rational one in witnesses, otherwise
    one over a cubic or quadratic extension in extension_witnesses.
    """
    curve: CurveSummary
    scan_bound: int
    bad_primes: List[int]
    witnesses: Dict[int, Point]
    pi_c: BigInt
    log_pi_c: float
    extension_witnesses: Dict[int, ExtensionWitness] = {}


class HeightExponentRow(BaseModelWithArbitraryTypes):
    index: int
    height_p: BigInt
    height_q: BigInt
    height_r: BigInt
    ratio: float


class HeightExponentEstimate(BaseModelWithArbitraryTypes):
    estimate: float
    suggested_A: int
    rows: List[HeightExponentRow]
    note: str = "empirical lower estimate of a valid exponent, not the absolute constant"


class DivisibilityCertificate(BaseModelWithArbitraryTypes):
    p: int
    N_p: int
    block_sizes: List[int]
    verified: bool
    status: Literal["verified", "vanishing determinant", "violated"]
    valuation: Optional[int] = None
    n_p: Optional[int] = None
    comparison: Optional[float] = None  # s^2 / (2 n_p)


class GlobalFactorReport(BaseModelWithArbitraryTypes):
    T: BigInt
    log_T: float
    prime_limit: int
    certificates: List[DivisibilityCertificate]
    determinant_vanishes: bool
    divides_determinant: Optional[bool] = None
    good_prime_estimate: float  # (s^2/2) * sum over good p <= limit of log p / n_p
    target: Optional[float] = None  # (s^2/2) log(s / log B)


class AuxiliaryForm(BaseModelWithArbitraryTypes):
    coefficients: List[BigInt]
    monomials: List[str]
    vanishes_on_pairs: bool
    sample_prime: int
    nonvanishing_sample: Tuple[Point, Point]


class InequalityDiagnostic(BaseModelWithArbitraryTypes):
    lhs: float
    rhs: float
    holds: bool


class ParameterChoice(BaseModelWithArbitraryTypes):
    a: int
    b: int
    s: int
    inequality_8: InequalityDiagnostic


class ExperimentConfig(BaseModelWithArbitraryTypes):
    A: Optional[float] = None
    u: float = 1.0
    prime_limit: Optional[int] = None
    q: Optional[int] = None
    a: int = 1
    use_chosen_parameters: bool = False
    max_basis_size: int = 600
    all_minors: bool = False
    seed: int = 0
    search_radius: int = 2
    seed_count: int = 8
    pair_cap: int = 64
    workers: int = 1


class MinorCertificate(BaseModelWithArbitraryTypes):
    rows: List[int]
    determinant: BigInt
    global_factor: GlobalFactorReport
    lemma5_blocks_verified: bool


class ExperimentReport(BaseModelWithArbitraryTypes):
    curve: CurveSummary
    m: int
    B: int
    R: Point
    rank_provenance: str
    a: int
    b: int
    s: int
    basis_condition: bool
    parameter_choice: ParameterChoice
    A: float
    A_source: str
    u: float
    basis_monomials: List[str]
    sample_prime: int
    points_found: int
    pairs: List[Tuple[Point, Point]]
    pair_count: int
    matrix_rank: int
    scarcity_forced: bool
    minors: List[MinorCertificate] = []
    auxiliary_form: Optional[AuxiliaryForm] = None
    bezout_bound: int
    bezout_holds: Optional[bool] = None
    inequality_5: Optional[InequalityDiagnostic] = None
    inequality_7: Optional[InequalityDiagnostic] = None
    inequality_8: InequalityDiagnostic
    errors: List[str] = []
    notes: List[str] = []


class Theorem1Bound(BaseModelWithArbitraryTypes):
    B: int
    r: int
    m: int
    value: float
    m_power: BigInt  # m^r, exact
    exponent: str  # 2/(3 m^2) as an exact fraction
    log_B: float


class MertensDiagnostics(BaseModelWithArbitraryTypes):
    s: int
    sum_log_p_over_p: float
    log_s: float
    sum_log_p: float
    deviation: float  # |sum log p/p - log s|
    chebyshev_ratio: float  # (sum log p) / s


class Lemma8Check(BaseModelWithArbitraryTypes):
    pi: BigInt
    prime_divisors: List[int]
    lhs: float
    rhs: float
    holds: bool


class Lemma8Sweep(BaseModelWithArbitraryTypes):
    limit: int
    checked: int
    failures: List[int]
    smallest_margin: float
    smallest_margin_at: int


class Theorem9Report(BaseModelWithArbitraryTypes):
    r: int
    m_values: List[str] = Field(description="m_1..m_L as exact fractions, L = max(r, 16)")
    partial_sums: List[str]
    exponent: str
    corollary_bound: str  # 1 + r/2
    corollary_holds: bool


class ReductionDiagnostics(BaseModelWithArbitraryTypes):
    B: int
    coefficient_norm: BigInt
    norm_ratio: float  # log ||F|| / (30 log B)
    pi_c: BigInt
    scan_bound: int
    bad_prime_ratio: float  # log Pi_C / log B
    bad_prime_sum: float  # sum over p | Pi_C of log p / p
    log_log_B: float
    n_observed: int
    at_most_nine: bool


class ComparisonBounds(BaseModelWithArbitraryTypes):
    B: int
    r: int
    m: int
    theorem1: float
    earlier_estimate: float
    exponent_ladder: Dict[str, str]
    torsion_cap: Optional[int] = None


class GrowthRow(BaseModelWithArbitraryTypes):
    B: int
    N: int
    m: int
    theorem1_bound: float
    log_power: float  # (log B)^{2 + r/2}
