# Fixed monomial order of a ternary cubic: (e0, e1, e2) exponents of (x0, x1, x2)
CUBIC_MONOMIALS = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
    (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
)

MAZUR_TORSION_BOUND = 16  # at most 16 torsion points, so at most 16 m^r classes
THEOREM9_RANK_THRESHOLD = 16
LEMMA4_POINT_THRESHOLD = 9
LEMMA4_NORM_EXPONENT = 30

DEFAULT_OPTIONS = {
    "SMOOTHNESS_PRIME_BUDGET": 25,   # witness primes tried before giving up
    "SMOOTHNESS_FIRST_PRIME": 5,     # witness primes skip characteristic 2 and 3
    "SINGULAR_SEARCH_HEIGHT": 10,    # height box searched for rational singular points
    "PRIME_SCAN_BOUND": 10_000,      # bad-prime scan limit
    "SAMPLE_PRIME_START": 500,       # X(F_q) samples use the smallest good prime above this
    "SAMPLE_PRIME_RETRIES": 4,       # q doubles on every retry
    "SEARCH_RADIUS": 2,
    "SEED_COUNT": 8,
    "PAIR_CAP": 64,
    "LEMMA3_U": 1,
    "BIDEGREE_A": 1,
    "MAX_BASIS_SIZE": 600,
    "ALL_MINORS_SLACK": 2,           # certify every s x s minor only when N - s is at most this
    "PRECISION_DPS": 30,
    "RELATIVE_TOLERANCE": 1e-9,
    "SEED": 0,
    "WORKERS": 1,
}

FIXTURE_DIR_ENV = "CUBIPY_FIXTURE_DIR"
DEFAULT_FIXTURE_DIR = "curves"
RANK_PROVENANCE = "fixture-supplied, unverified"
PARTITION_METHOD_NOTE = "heuristic: bounded m-division search, may be finer than the true classes"
