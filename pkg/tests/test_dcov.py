import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcorr import (
    ConfigError,
    DegenerateSeries,
    LagError,
    NumericalError,
    ShapeError,
    TooFewObservations,
    WeightMeasure,
    acf,
    adcf,
    adcv,
    cdcf,
    dcor,
    dcov_v,
    kernel_matrix,
    simulate_ar,
)
from dcorr.dcov import _clamp_correlation, adcf_from_kernel
from dcorr.measures import pairwise_kernel
from dcorr.noise import NoiseGen
from support import ALL_MEASURES, triple_sum_dcov

SZEKELY1 = WeightMeasure.szekely_power(1.0)
GAUSS05 = WeightMeasure.gaussian_cf(0.5)


class TestKernelMatrix:
    def test_two_point_power_weight(self):
        km = kernel_matrix([0.0, 1.0], SZEKELY1)
        np.testing.assert_array_equal(km.entries, [[0.0, 1.0], [1.0, 0.0]])
        assert km.grand_sum == 2.0

    def test_constant_series_gives_constant_matrix(self):
        km = kernel_matrix([3.0, 3.0, 3.0], GAUSS05)
        np.testing.assert_array_equal(km.entries, np.ones((3, 3)))

    def test_gaussian_offdiagonals(self):
        km = kernel_matrix([0.0, 1.0, 3.0], GAUSS05)
        assert km.entries[0, 1] == pytest.approx(math.exp(-0.25), rel=1e-12)
        assert km.entries[1, 2] == pytest.approx(math.exp(-1.0), rel=1e-12)
        assert km.entries[0, 2] == pytest.approx(math.exp(-2.25), rel=1e-12)

    def test_diagonal_is_kernel_at_zero(self):
        km = kernel_matrix([1.0, 2.0, 5.0], SZEKELY1)
        np.testing.assert_array_equal(np.diag(km.entries), np.zeros(3))

    def test_row_sums_consistent(self, rng):
        x = rng.standard_normal(40)
        km = kernel_matrix(x, GAUSS05)
        np.testing.assert_allclose(km.row_sums, km.entries.sum(axis=1), rtol=1e-12)
        assert km.grand_sum == pytest.approx(km.entries.sum(), rel=1e-12)

    def test_too_few_points(self):
        with pytest.raises(TooFewObservations):
            kernel_matrix([1.0], SZEKELY1)


class TestDcov:
    def test_hand_value_m2(self):
        assert dcov_v([0.0, 1.0], [0.0, 1.0], SZEKELY1) == pytest.approx(0.25, abs=1e-15)

    def test_constant_margin_is_zero(self, rng):
        x = rng.standard_normal(25)
        y = np.full(25, 2.5)
        for m in (SZEKELY1, GAUSS05):
            assert abs(dcov_v(x, y, m)) < 1e-14

    def test_matches_triple_sum_oracle(self, rng):
        for i, measure in enumerate(ALL_MEASURES):
            m = int(rng.integers(5, 15))
            x = rng.standard_normal(m) * (1 + i)
            y = 0.4 * x + rng.standard_normal(m)
            expected = triple_sum_dcov(x, y, measure)
            got = dcov_v(x, y, measure)
            assert got == pytest.approx(expected, rel=1e-12, abs=1e-14)

    def test_streaming_matches_matrix_path(self, rng):
        x = rng.standard_normal(60)
        y = rng.standard_normal(60) + 0.3 * x
        for measure in ALL_MEASURES:
            full = dcov_v(x, y, measure)
            stream = dcov_v(x, y, measure, low_memory=True)
            assert stream == pytest.approx(full, rel=1e-12, abs=1e-15)

    def test_nonnegative_distance_variance(self, rng):
        for measure in ALL_MEASURES:
            x = rng.standard_normal(30)
            assert dcov_v(x, x, measure) >= -1e-12

    def test_shift_invariance(self, rng):
        x = rng.standard_normal(30)
        y = rng.standard_normal(30)
        for measure in (SZEKELY1, GAUSS05):
            base = dcov_v(x, y, measure)
            shifted = dcov_v(x + 17.0, y - 4.0, measure)
            assert shifted == pytest.approx(base, rel=1e-12, abs=1e-15)

    def test_power_weight_scale_homogeneity(self, rng):
        alpha = 0.8
        measure = WeightMeasure.szekely_power(alpha)
        x = rng.standard_normal(30)
        y = rng.standard_normal(30)
        c = 3.7
        assert dcov_v(c * x, c * y, measure) == pytest.approx(
            abs(c) ** (2 * alpha) * dcov_v(x, y, measure), rel=1e-10
        )

    def test_joint_permutation_invariance(self, rng):
        x = rng.standard_normal(25)
        y = rng.standard_normal(25)
        perm = rng.permutation(25)
        for measure in (SZEKELY1, GAUSS05):
            assert dcov_v(x[perm], y[perm], measure) == pytest.approx(
                dcov_v(x, y, measure), rel=1e-12
            )

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            dcov_v([1.0, 2.0, 3.0], [1.0, 2.0], SZEKELY1)


class TestDcor:
    def test_perfect_dependence_m2(self):
        assert dcor([0.0, 1.0], [0.0, 1.0], SZEKELY1) == 1.0

    def test_sign_flip_gives_one(self, rng):
        x = rng.standard_normal(20)
        for measure in (SZEKELY1, GAUSS05):
            assert dcor(x, -x, measure) == 1.0

    def test_scale_invariance(self, rng):
        x = rng.standard_normal(40)
        y = rng.standard_normal(40) + 0.5 * x
        base = dcor(x, y, SZEKELY1)
        assert dcor(5.0 * x, 5.0 * y, SZEKELY1) == pytest.approx(base, rel=1e-10)

    def test_independent_samples_small_value(self, rng):
        x = rng.standard_normal(800)
        y = rng.standard_normal(800)
        assert dcor(x, y, GAUSS05) < 0.1

    def test_degenerate_margin(self):
        with pytest.raises(DegenerateSeries):
            dcor([1.0, 1.0, 1.0], [1.0, 2.0, 3.0], SZEKELY1)

    def test_clamp_small_negative_to_zero(self):
        assert _clamp_correlation(-5e-10) == 0.0
        assert _clamp_correlation(1.0 + 1e-13) == 1.0

    def test_clamp_rejects_large_negative(self):
        with pytest.raises(NumericalError):
            _clamp_correlation(-2e-9)

    @given(
        data=st.lists(
            st.floats(-100, 100, allow_nan=False), min_size=4, max_size=12
        )
    )
    @settings(max_examples=30, deadline=None)
    def test_range_zero_one_on_arbitrary_data(self, data):
        x = np.asarray(data)
        y = x[::-1].copy()
        try:
            r = dcor(x, y, GAUSS05)
        except DegenerateSeries:
            return
        assert 0.0 <= r <= 1.0


class TestAdcf:
    def test_matches_per_lag_dcor(self, rng):
        x = np.cumsum(rng.standard_normal(160))
        n = x.size
        for measure in (SZEKELY1, GAUSS05, WeightMeasure.stable_cf(1.5, 0.8)):
            curve = adcf(x, 12, measure)
            direct = [dcor(x[: n - h], x[h:], measure) for h in range(1, 13)]
            np.testing.assert_allclose(curve.values, direct, rtol=1e-9, atol=1e-12)

    def test_periodic_series_lag_two(self):
        x = np.array([(-1.0) ** t for t in range(30)])
        curve = adcf(x, 3, GAUSS05)
        assert curve.values[1] == pytest.approx(1.0, abs=1e-12)

    def test_scaled_multiplies_by_n(self, rng):
        x = rng.standard_normal(120)
        plain = adcf(x, 5, GAUSS05)
        scaled = adcf(x, 5, GAUSS05, scaled=True)
        np.testing.assert_allclose(scaled.values, plain.values * 120, rtol=1e-12)
        assert scaled.statistic == "scaled_adcf"

    def test_values_in_unit_interval(self, rng):
        x = np.cumsum(rng.standard_normal(200))
        curve = adcf(x, 30, SZEKELY1)
        assert np.all(curve.values >= 0.0)
        assert np.all(curve.values <= 1.0)

    def test_lag_bounds(self, rng):
        x = rng.standard_normal(20)
        with pytest.raises(LagError):
            adcf(x, 0, GAUSS05)
        with pytest.raises(LagError):
            adcf(x, 19, GAUSS05)

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateSeries):
            adcf(np.ones(30), 2, GAUSS05)

    def test_ar_sample_detects_dependence(self, rng):
        x = simulate_ar([0.7], NoiseGen.gaussian(), 600, seed=5)
        curve = adcf(x, 5, GAUSS05)
        white = adcf(rng.standard_normal(600), 5, GAUSS05)
        assert curve.values[0] > 10 * white.values[0]


class TestAdcv:
    def test_lag_zero_is_distance_variance(self, rng):
        x = rng.standard_normal(80)
        curve = adcv(x, 3, GAUSS05)
        assert curve.lags[0] == 0
        assert curve.values[0] == pytest.approx(dcov_v(x, x, GAUSS05), rel=1e-12)

    def test_matches_sliced_dcov(self, rng):
        x = np.cumsum(rng.standard_normal(90))
        curve = adcv(x, 4, SZEKELY1)
        for h, value in zip(curve.lags[1:], curve.values[1:]):
            assert value == pytest.approx(
                dcov_v(x[: 90 - h], x[h:], SZEKELY1), rel=1e-12
            )


class TestCdcf:
    def test_shifted_copy_detected_at_positive_lag(self, rng):
        x = rng.standard_normal(120)
        # y runs three steps behind x, so x leads y by 3
        y = np.roll(x, 3)
        curve = cdcf(x, y, [-3, 0, 3], SZEKELY1)
        by_lag = dict(zip(curve.lags, curve.values))
        assert by_lag[3] == pytest.approx(1.0, abs=1e-12)
        assert by_lag[-3] < 0.5

    def test_leading_copy_detected_at_negative_lag(self, rng):
        y = rng.standard_normal(120)
        # x runs three steps behind y, so y leads x by 3
        x = np.roll(y, 3)
        curve = cdcf(x, y, [-3], SZEKELY1)
        assert curve.values[0] == pytest.approx(1.0, abs=1e-12)

    def test_lag_zero_equals_dcor(self, rng):
        x = rng.standard_normal(60)
        y = rng.standard_normal(60) + 0.4 * x
        curve = cdcf(x, y, [0], GAUSS05)
        assert curve.values[0] == dcor(x, y, GAUSS05)

    def test_independent_series_small_everywhere(self, rng):
        x = rng.standard_normal(500)
        y = rng.standard_normal(500)
        curve = cdcf(x, y, list(range(-4, 5)), GAUSS05)
        assert np.all(curve.values < 0.1)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            cdcf([1.0, 2.0, 3.0], [1.0, 2.0], [0], SZEKELY1)

    def test_lag_out_of_range(self, rng):
        x = rng.standard_normal(10)
        with pytest.raises(LagError):
            cdcf(x, x, [9], SZEKELY1)


class TestAcf:
    def test_white_noise_near_zero(self, rng):
        x = rng.standard_normal(2000)
        curve = acf(x, 5)
        assert np.all(np.abs(curve.values) < 1.96 / math.sqrt(2000) * 2.5)

    def test_linear_trend_near_one(self):
        curve = acf(np.arange(500, dtype=float), 1)
        assert curve.values[0] > 0.9

    def test_ar1_matches_population_value(self):
        x = simulate_ar([0.5], NoiseGen.gaussian(), 5000, seed=11)
        curve = acf(x, 3)
        assert curve.values[0] == pytest.approx(0.5, abs=0.05)
        assert curve.values[1] == pytest.approx(0.25, abs=0.05)

    def test_transforms(self, rng):
        x = rng.standard_normal(300)
        for transform in ("identity", "square", "abs"):
            curve = acf(x, 5, transform=transform)
            assert np.all(np.abs(curve.values) <= 1.0)

    def test_zero_variance(self):
        with pytest.raises(DegenerateSeries):
            acf(np.ones(50), 2)

    def test_unknown_transform(self, rng):
        with pytest.raises(ConfigError):
            acf(rng.standard_normal(50), 2, transform="cube")


class TestKernelReindexing:
    def test_gathered_matrix_matches_rebuilt(self, rng):
        # kernel matrix of a reindexed sample == reindexed kernel matrix
        x = rng.standard_normal(50)
        K = pairwise_kernel(x, GAUSS05)
        idx = rng.integers(0, 50, 50)
        direct = pairwise_kernel(x[idx], GAUSS05)
        np.testing.assert_array_equal(K[np.ix_(idx, idx)], direct)

    def test_adcf_from_kernel_with_supplied_sums(self, rng):
        x = rng.standard_normal(80)
        K = pairwise_kernel(x, GAUSS05)
        row_tot = K.sum(axis=1)
        grand_sq = float(np.einsum("ij,ij->", K, K))
        np.testing.assert_allclose(
            adcf_from_kernel(K, 6, row_tot, grand_sq),
            adcf_from_kernel(K, 6),
            rtol=1e-12,
        )
