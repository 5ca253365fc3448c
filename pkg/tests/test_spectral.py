"""Semimetric validation, cut decompositions, line metrics, rigidity probing."""

import pytest
from hypothesis import given, strategies as st

from taildep.coeffs import lambda_from_beta, td_matrix
from taildep.errors import MalformedMatrix, NotInCutCone
from taildep.instances import (
    comonotone_model,
    independence_model,
    k23_metric,
    line_metric_from_weights,
    random_beta,
    random_line_instance,
)
from taildep.rationals import ZERO, rat
from taildep.spectral import (
    LineMetricCert,
    LineTmModel,
    NotLine,
    NotRealizableAtTheseMarginals,
    SemiMetric,
    canonical_cut,
    canonical_cuts,
    cut_decomposition,
    detect_line_metric,
    distance_from_td,
    higher_order_from_line,
    line_tm_model,
    rigidity_probe,
    validate,
)
from taildep.subsets import mask_of
from taildep.tm import TmModel

from oracles import brute_cut_reconstruction


class TestValidate:
    def test_comonotone_pair_semimetric_not_metric(self):
        d = SemiMetric.from_rows([[0, 0], [0, 0]])
        report = validate(d)
        assert report.is_semimetric and not report.is_metric

    def test_line_metric_valid(self, line_metric):
        report = validate(line_metric)
        assert report.is_semimetric and report.is_metric
        assert report.violations == ()

    def test_forced_triangle_violation_reported(self):
        d = SemiMetric.from_rows([[0, 0, 0], [0, 0, 2], [0, 2, 0]])
        report = validate(d)
        assert not report.is_semimetric
        assert (1, 0, 2) in report.violations  # d(2,3) > d(2,1) + d(1,3)

    def test_malformed_matrices_rejected(self):
        with pytest.raises(MalformedMatrix):
            SemiMetric.from_rows([[0, 1], [2, 0]])
        with pytest.raises(MalformedMatrix):
            SemiMetric.from_rows([[0, -1], [-1, 0]])
        with pytest.raises(MalformedMatrix):
            SemiMetric.from_rows([[1, 0], [0, 0]])


class TestCutDecomposition:
    def test_independence_pair(self):
        cuts = cut_decomposition(independence_model(2))
        assert cuts.weight(1) == 2
        assert cuts.slack_full == 0
        assert cuts.reconstruct().d[0][1] == 2

    def test_comonotone_pair_pure_slack(self):
        cuts = cut_decomposition(comonotone_model(2))
        assert cuts.cuts == ()
        assert cuts.slack_full == 1
        assert cuts.reconstruct().d[0][1] == 0

    def test_line_instance_merges_onto_gaps(self, line_model, line_metric):
        cuts = cut_decomposition(line_model)
        assert cuts.weight(mask_of(1)) == 1
        assert cuts.weight(mask_of(1, 2)) == 2
        assert cuts.weight(mask_of(1, 3)) == 0
        assert cuts.slack_full == rat(1, 2)
        assert cuts.reconstruct().d == line_metric.d

    def test_reconstruction_matches_bruteforce_and_distance(self, rng):
        for _ in range(15):
            beta = random_beta(rng.randint(2, 6), rng)
            model = TmModel(beta.p, beta)
            cuts = cut_decomposition(model)
            recon = cuts.reconstruct()
            # against the O(p^2 * cuts) direct loop
            brute = brute_cut_reconstruction(
                {m: w for m, w in cuts.cuts}, beta.p
            )
            assert [list(row) for row in recon.d] == brute
            # and against the coefficient-level spectral distance
            dist = distance_from_td(td_matrix(lambda_from_beta(beta)))
            assert recon.d == dist.d

    def test_reconstruction_always_a_semimetric(self, rng):
        for _ in range(10):
            beta = random_beta(rng.randint(2, 6), rng)
            recon = cut_decomposition(TmModel(beta.p, beta)).reconstruct()
            assert validate(recon).is_semimetric

    def test_canonical_side_contains_component_one(self):
        assert canonical_cut(0b110, 3) == 0b001
        assert canonical_cut(0b011, 3) == 0b011
        assert all(m & 1 for m in canonical_cuts(5))
        assert len(canonical_cuts(5)) == 15


class TestDetectLineMetric:
    def test_line_fixture(self, line_metric):
        cert = detect_line_metric(line_metric)
        assert isinstance(cert, LineMetricCert)
        assert cert.order == (0, 1, 2)
        assert cert.weights == (1, 2)

    def test_equilateral_rejected(self):
        d = SemiMetric.from_rows([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        result = detect_line_metric(d)
        assert isinstance(result, NotLine)

    def test_any_two_points_are_a_line(self):
        d = SemiMetric.from_rows([[0, rat(5, 3)], [rat(5, 3), 0]])
        cert = detect_line_metric(d)
        assert isinstance(cert, LineMetricCert)
        assert cert.weights == (rat(5, 3),)

    def test_zero_weights_and_colocated_points(self):
        d = line_metric_from_weights([0, 5, 0])
        cert = detect_line_metric(d)
        assert isinstance(cert, LineMetricCert)
        assert cert.distance(0, 3) == 5

    def test_all_zero_metric_is_a_line(self):
        d = SemiMetric.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 0]])
        assert isinstance(detect_line_metric(d), LineMetricCert)

    @given(
        st.lists(
            st.fractions(min_value=0, max_value=8, max_denominator=6),
            min_size=1,
            max_size=11,
        ),
        st.randoms(use_true_random=False),
    )
    def test_round_trip_on_generated_lines(self, weights, pyrandom):
        weights = [rat(str(w)) for w in weights]
        p = len(weights) + 1
        order = list(range(p))
        pyrandom.shuffle(order)
        d = line_metric_from_weights(weights, order)
        cert = detect_line_metric(d)
        assert isinstance(cert, LineMetricCert)
        # the recovered placement reproduces every pairwise distance
        pos = cert.position_of()
        for i in range(p):
            for j in range(p):
                assert cert.distance(pos[i], pos[j]) == d.d[i][j]


class TestLineTmModel:
    def test_fixture_weights(self, line_metric, line_model):
        cert = detect_line_metric(line_metric)
        built = line_tm_model(cert, [2, 2, 2])
        assert isinstance(built, LineTmModel)
        assert dict(built.model.support()) == dict(line_model.support())

    def test_too_small_marginals_fail_with_witness(self, line_metric):
        cert = detect_line_metric(line_metric)
        failure = line_tm_model(cert, [1, 1, 1])
        assert isinstance(failure, NotRealizableAtTheseMarginals)
        assert dict(failure.negative)[mask_of(1, 2, 3)] == rat(-1, 2)

    def test_zero_weights_comonotone(self):
        d = line_metric_from_weights([0, 0])
        cert = detect_line_metric(d)
        built = line_tm_model(cert, [rat(5, 2)] * 3)
        assert isinstance(built, LineTmModel)
        assert dict(built.model.support()) == {mask_of(1, 2, 3): rat(5, 2)}

    def test_support_only_prefixes_and_suffixes(self, rng):
        for _ in range(20):
            p = rng.randint(2, 8)
            weights, marginals = random_line_instance(p, rng)
            cert = detect_line_metric(line_metric_from_weights(weights))
            built = line_tm_model(cert, [marginals[cert.position_of()[i]] for i in range(p)])
            assert isinstance(built, LineTmModel)
            full = (1 << p) - 1
            pos = cert.position_of()
            for mask, w in built.model.support():
                positions = sorted(pos[i] for i in range(p) if mask >> i & 1)
                contiguous = positions == list(range(positions[0], positions[-1] + 1))
                assert contiguous and (0 in positions or p - 1 in positions) or mask == full

    def test_higher_order_collapses_to_extremes(self, line_metric):
        cert = detect_line_metric(line_metric)
        built = line_tm_model(cert, [2, 2, 2])
        assert higher_order_from_line(built, mask_of(1, 2, 3)) == rat(1, 2)
        assert higher_order_from_line(built, mask_of(1, 3)) == rat(1, 2)
        assert higher_order_from_line(built, mask_of(2)) == 2
        # gap-skipping subsets equal their contiguous hulls, all subsets
        lam = lambda_from_beta(built.model.beta)
        for mask in range(1, 8):
            assert higher_order_from_line(built, mask) == lam[mask]


class TestRigidityProbe:
    def test_line_ranges_degenerate_at_gap_weights(self, line_metric):
        report = rigidity_probe(line_metric, trials=20)
        assert report.rigid_consistent
        expected = {mask_of(1): rat(1), mask_of(1, 2): rat(2)}
        for mask, lo, hi in report.ranges:
            assert lo == hi == expected.get(mask, ZERO)

    def test_equilateral_p4_non_rigid_with_witness(self):
        d = SemiMetric.from_rows(
            [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
        )
        report = rigidity_probe(d, trials=20)
        assert not report.rigid_consistent
        first, second = report.witness_pair
        assert first.reconstruct().d == d.d
        assert second.reconstruct().d == d.d
        assert first.cuts != second.cuts

    def test_two_points_trivially_rigid(self):
        d = SemiMetric.from_rows([[0, rat(7, 4)], [rat(7, 4), 0]])
        report = rigidity_probe(d, trials=5)
        assert report.rigid_consistent
        assert report.ranges == ((1, rat(7, 4), rat(7, 4)),)

    def test_k23_not_in_cut_cone(self):
        with pytest.raises(NotInCutCone):
            rigidity_probe(k23_metric(), trials=3)


def test_distance_from_td_shares_coeffs_examples(line_model):
    td = td_matrix(lambda_from_beta(line_model.beta))
    d = distance_from_td(td)
    assert d.d[0][1] == 1 and d.d[1][2] == 2 and d.d[0][2] == 3
