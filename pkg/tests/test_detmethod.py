import pytest

from src.helpers.cubic.arith import ExactMatrix, det_exact, primes_up_to, valuation
from src.helpers.cubic.curve import ProjPoint, enumerate_rational_points, good_reduction, reduce_point_mod_p
from src.helpers.cubic.descent import XPair, build_x_points
from src.helpers.cubic.detmethod import (
    BiMonomial,
    BlockPartition,
    all_bimonomials,
    bezout_count_check,
    build_matrix,
    congruence_blocks,
    evaluate_auxiliary,
    find_auxiliary_form,
    global_factor,
    lemma5_certificate,
    lemma6_certificate,
    run_experiment,
    select_independent_monomials,
)
from src.helpers.cubic.errors import BadReductionError, BoundInputError
from src.helpers.cubic.group import GroupContext, scalar_mul
from src.types import ExperimentConfig


@pytest.fixture
def f6_pairs(f6, origin, generator):
    ctx = GroupContext(f6, origin)
    return build_x_points(f6, origin, 1, [scalar_mul(ctx, k, generator) for k in range(-3, 4)])


def test_bimonomials():
    assert len(all_bimonomials(1, 1)) == 9
    assert len(all_bimonomials(2, 1)) == 18
    assert len(all_bimonomials(1, 4)) == 45
    assert str(BiMonomial((1, 0, 0), (0, 0, 2))) == "x0*y2^2"
    assert str(BiMonomial((0, 0, 0), (0, 0, 0))) == "1"
    assert BiMonomial((1, 0, 0), (0, 0, 1)).evaluate((1, 0, -1), (1, 0, -1)) == -1
    assert BiMonomial((1, 0, 0), (1, 0, 0)).bidegree == (1, 1)
    with pytest.raises(BoundInputError):
        all_bimonomials(-1, 1)


@pytest.mark.parametrize("m, a, b", [(1, 1, 1), (1, 2, 1), (1, 3, 2), (2, 1, 4), (2, 2, 4)])
def test_basis_reaches_full_dimension(f6, origin, m, a, b):
    basis = select_independent_monomials(f6, origin, m, a, b)
    assert basis.s == basis.target == 3 * (m * m * a + b)
    assert basis.certified_rank == basis.s
    assert good_reduction(f6, basis.q) and basis.q > 500


def test_basis_rejects_small_b(f6, origin):
    with pytest.raises(BoundInputError):
        select_independent_monomials(f6, origin, 2, 1, 3)


def test_build_matrix_entries(f6, origin, f6_pairs):
    basis = select_independent_monomials(f6, origin, 1, 1, 1)
    matrix = build_matrix(f6_pairs, basis)
    assert (matrix.rows, matrix.cols) == (len(f6_pairs), basis.s)
    for j, pair in enumerate(f6_pairs):
        for i, monomial in enumerate(basis.monomials):
            expected = 1
            for base, e in zip(pair.P.coords + pair.Q.coords, monomial.x + monomial.y):
                expected *= base ** e
            assert matrix.entries[j][i] == expected
    assert matrix.col_labels == tuple(str(monomial) for monomial in basis.monomials)


def test_congruence_blocks(f6, f6_pairs):
    blocks = congruence_blocks(f6, f6_pairs, 5)
    regrouped = {}
    for j, pair in enumerate(f6_pairs):
        regrouped.setdefault(reduce_point_mod_p(pair.Q, 5), []).append(j)
    assert blocks.blocks == regrouped
    assert sum(blocks.sizes) == len(f6_pairs)
    with pytest.raises(BadReductionError):
        congruence_blocks(f6, f6_pairs, 2)


def test_lemma5_certificate():
    assert lemma5_certificate(ExactMatrix.from_rows([[7]]), 5, 1)
    assert lemma5_certificate(ExactMatrix.from_rows([[1, 1], [1, 6]]), 5, 2)
    assert not lemma5_certificate(ExactMatrix.from_rows([[1, 1], [1, 2]]), 5, 2)
    assert lemma5_certificate(ExactMatrix.from_rows([[1, 2], [2, 4]]), 5, 2)


def test_lemma6_certificate():
    point = ProjPoint((1, 0, 0), 5)
    other = ProjPoint((0, 1, 0), 5)
    delta = ExactMatrix.from_rows([[1, 1, 0], [1, 6, 0], [0, 0, 1]])
    certificate = lemma6_certificate(delta, BlockPartition(5, {point: [0, 1], other: [2]}), 5, n_p=6)
    assert certificate.N_p == 1
    assert certificate.verified and certificate.status == "verified"
    assert certificate.valuation == 1
    assert certificate.comparison == pytest.approx(9 / 12)

    singular = ExactMatrix.from_rows([[1, 1], [1, 1]])
    vanishing = lemma6_certificate(singular, BlockPartition(5, {point: [0], other: [1]}), 5)
    assert vanishing.status == "vanishing determinant" and vanishing.N_p == 0


def test_block_exponent():
    blocks = BlockPartition(5, {ProjPoint((1, 0, 0), 5): [0, 1], ProjPoint((0, 1, 0), 5): [2, 3],
                                ProjPoint((0, 0, 1), 5): [4]})
    assert blocks.sizes == [2, 2, 1]
    assert blocks.exponent == 2


def _certify_square_minor(form, pairs, basis, prime_limit=50):
    matrix = build_matrix(pairs, basis)
    n = min(matrix.rows, matrix.cols)
    pairs = pairs[:n]
    delta = matrix.submatrix(range(n), range(n))
    det = int(det_exact(delta))
    report = global_factor(form, delta, pairs, prime_limit)
    expected_T = 1
    for p in primes_up_to(prime_limit):
        if not good_reduction(form, p):
            continue
        blocks = congruence_blocks(form, pairs, p)
        expected_T *= p ** sum(len(rows) * (len(rows) - 1) // 2 for rows in blocks.blocks.values())
        for rows in blocks.blocks.values():
            if len(rows) >= 2:
                assert lemma5_certificate(delta.submatrix(rows, range(len(rows))), p, len(rows))
    return det, report, expected_T


def test_global_factor_on_rank_one_points(rank_one_37):
    origin = ProjPoint((0, 1, 0))
    points = enumerate_rational_points(rank_one_37, 15)
    pairs = build_x_points(rank_one_37, origin, 1, points)[:6]
    basis = select_independent_monomials(rank_one_37, origin, 1, 1, 1)
    det, report, expected_T = _certify_square_minor(rank_one_37, pairs, basis)
    assert report.T == expected_T
    assert all(certificate.verified for certificate in report.certificates)
    if det:
        assert det % report.T == 0
        assert report.divides_determinant
        for certificate in report.certificates:
            assert valuation(det, certificate.p) >= certificate.N_p
    else:
        assert report.determinant_vanishes


def test_global_factor_on_f6_descent_pairs(f6, origin, generator):
    ctx = GroupContext(f6, origin)
    pairs = build_x_points(f6, origin, 2, [scalar_mul(ctx, k, generator) for k in range(1, 5)])
    basis = select_independent_monomials(f6, origin, 2, 1, 4)
    matrix = build_matrix(pairs, basis)
    # N < s, so certify the N x N minor on the first N columns
    n = matrix.rows
    delta = matrix.submatrix(range(n), range(n))
    report = global_factor(f6, delta, pairs, 50)
    assert all(certificate.verified for certificate in report.certificates)
    if not report.determinant_vanishes:
        assert int(det_exact(delta)) % report.T == 0


def test_global_factor_on_f6_generator_multiples(f6, origin, f6_pairs):
    basis = select_independent_monomials(f6, origin, 1, 1, 1)
    det, report, expected_T = _certify_square_minor(f6, f6_pairs, basis)
    assert report.T == expected_T
    # G and -G reduce to the same point mod 5, so the certificate is not vacuous
    assert report.T > 1 and report.T % 5 == 0
    assert all(certificate.verified for certificate in report.certificates)
    if det:
        assert det % report.T == 0


def test_negated_representative_only_flips_the_sign(rank_one_37):
    origin = ProjPoint((0, 1, 0))
    pairs = build_x_points(rank_one_37, origin, 1, enumerate_rational_points(rank_one_37, 15))[:6]
    basis = select_independent_monomials(rank_one_37, origin, 1, 1, 1)
    delta = build_matrix(pairs, basis)

    rows = []
    for j, pair in enumerate(pairs):
        P = tuple(-c for c in pair.P.coords) if j == 0 else pair.P.coords
        rows.append([monomial.evaluate(P, pair.Q.coords) for monomial in basis.monomials])
    scaled = ExactMatrix.from_rows(rows)

    assert det_exact(scaled) == -det_exact(delta)
    original = global_factor(rank_one_37, delta, pairs, 50)
    negated = global_factor(rank_one_37, scaled, pairs, 50)
    assert negated.T == original.T
    assert [(c.p, c.N_p, c.valuation, c.status) for c in negated.certificates] == \
           [(c.p, c.N_p, c.valuation, c.status) for c in original.certificates]


def test_all_singleton_blocks_give_trivial_t(f6, origin):
    pairs = [XPair(ProjPoint((1, -1, 0)), ProjPoint((1, -1, 0)), origin, 1)]
    delta = ExactMatrix.from_rows([[1]])
    report = global_factor(f6, delta, pairs, 20)
    assert report.T == 1
    assert report.divides_determinant


def test_auxiliary_form_when_pairs_are_scarce(f6, origin, f6_pairs):
    basis = select_independent_monomials(f6, origin, 1, 1, 1)
    pairs = f6_pairs[:4]
    G = find_auxiliary_form(pairs, basis)
    assert G is not None and G.vanishes_on_pairs
    assert all(evaluate_auxiliary(G.coefficients, basis, pair.P.coords, pair.Q.coords) == 0 for pair in pairs)
    sample_p, sample_q = G.nonvanishing_sample
    assert evaluate_auxiliary(G.coefficients, basis, sample_p, sample_q) % G.sample_prime != 0
    assert bezout_count_check(pairs, G, 1, 1, 1)


def test_no_auxiliary_form_at_full_rank(rank_one_37):
    origin = ProjPoint((0, 1, 0))
    pairs = build_x_points(rank_one_37, origin, 1, enumerate_rational_points(rank_one_37, 15))
    basis = select_independent_monomials(rank_one_37, origin, 1, 1, 1)
    assert find_auxiliary_form(pairs, basis) is None


def test_bezout_count_check(origin):
    def diagonal(k):
        point = ProjPoint((k, 1, 0))
        return XPair(point, point, origin, 1)

    five = [diagonal(k) for k in range(5)]
    assert bezout_count_check(five, None, 1, 1, 1)
    assert bezout_count_check(five + five, None, 1, 1, 1)
    assert not bezout_count_check([diagonal(k) for k in range(7)], None, 1, 1, 1)


def test_experiment_with_scarce_points(f6, origin):
    report = run_experiment(f6, origin, 1, 100, ExperimentConfig(A=1))
    assert report.pair_count == 3 and report.s == 6
    assert report.scarcity_forced
    assert report.matrix_rank < report.s
    assert report.auxiliary_form is not None and report.auxiliary_form.vanishes_on_pairs
    assert report.bezout_holds
    assert report.pair_count <= report.bezout_bound
    assert report.errors == []
    assert report.rank_provenance == "fixture-supplied, unverified"


def test_experiment_with_full_rank(rank_one_37):
    report = run_experiment(rank_one_37, ProjPoint((0, 1, 0)), 1, 15, ExperimentConfig(A=1))
    assert report.pair_count == 13 and report.s == 6
    assert not report.scarcity_forced
    assert report.matrix_rank == 6
    assert report.auxiliary_form is None
    assert report.errors == []
    first = report.minors[0]
    assert first.lemma5_blocks_verified
    assert (report.inequality_5 is None) == (first.determinant == 0)


def test_experiment_all_minors(rank_one_37):
    # eleven points of height <= 8 against s = 3(2 + 1) = 9
    config = ExperimentConfig(A=1, a=2, all_minors=True)
    report = run_experiment(rank_one_37, ProjPoint((0, 1, 0)), 1, 8, config)
    assert report.pair_count == 11 and report.s == 9
    assert len(report.minors) == 55
    assert report.errors == []


def test_pair_cap_keeps_every_pair_in_the_height_box(rank_one_37):
    config = ExperimentConfig(A=1, pair_cap=5)
    report = run_experiment(rank_one_37, ProjPoint((0, 1, 0)), 1, 15, config)
    assert report.points_found == report.pair_count == 13
    assert report.matrix_rank == report.s == 6
    assert report.auxiliary_form is None
    assert not report.scarcity_forced


def test_experiment_guards_the_basis_size(f6, origin):
    config = ExperimentConfig(A=1, use_chosen_parameters=True, max_basis_size=10)
    with pytest.raises(BoundInputError):
        run_experiment(f6, origin, 1, 100, config)


@pytest.mark.slow
def test_experiment_on_f6_at_height_1000(f6, origin):
    report = run_experiment(f6, origin, 1, 1000)
    assert report.A_source.startswith("empirical")
    assert report.auxiliary_form is not None
    assert report.pair_count <= report.bezout_bound
