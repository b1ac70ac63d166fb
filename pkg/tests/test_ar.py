import math

import numpy as np
import pytest

from dcorr import (
    ArModel,
    NoiseGen,
    NonCausalError,
    OrderError,
    ShapeError,
    SingularFit,
    acf,
    fit_ar_ls,
    fit_ar_yw,
    is_causal,
    residuals,
    select_order_aicc,
    simulate_ar,
)
from dcorr.ar import LEAST_SQUARES, _aicc, ar_recursion
from support import AR10_PHI

GAUSS = NoiseGen.gaussian(1.0)


class TestIsCausal:
    def test_stable_coefficient(self):
        assert is_causal([0.5]) is True

    def test_unit_root(self):
        assert is_causal([1.0]) is False

    def test_explosive(self):
        assert is_causal([1.1]) is False

    def test_empty_model(self):
        assert is_causal([]) is True

    def test_reference_ar10_vector(self):
        assert is_causal(AR10_PHI) is True

    def test_trailing_zero_coefficient(self):
        assert is_causal([0.5, 0.0]) is True


class TestFitLeastSquares:
    def test_recovers_deterministic_recursion(self):
        x = 0.5 ** np.arange(30)
        model = fit_ar_ls(x, 1)
        assert model.phi[0] == pytest.approx(0.5, abs=1e-8)
        assert np.max(np.abs(model.residuals)) < 1e-8

    def test_white_noise_coefficient_near_zero(self):
        for seed in range(5):
            x = GAUSS.draw(1000, seed)
            model = fit_ar_ls(x, 1)
            assert abs(model.phi[0]) < 3.0 / math.sqrt(1000)

    def test_recovers_ar10_coefficients(self):
        x = simulate_ar(AR10_PHI, GAUSS, 1000, seed=3)
        model = fit_ar_ls(x, 10)
        rmse = math.sqrt(np.mean((model.phi - AR10_PHI) ** 2))
        assert rmse < 0.1

    def test_residual_mean_is_zero(self):
        x = simulate_ar([0.6, -0.2], GAUSS, 500, seed=1) + 5.0
        model = fit_ar_ls(x, 2)
        assert abs(model.residuals.mean()) < 1e-8
        assert model.residuals.size == 500 - 2

    def test_noise_variance_scale(self):
        x = simulate_ar([0.5], NoiseGen.gaussian(2.0), 4000, seed=9)
        model = fit_ar_ls(x, 1)
        assert model.noise_variance == pytest.approx(4.0, rel=0.1)

    def test_mean_recorded(self):
        x = simulate_ar([0.4], GAUSS, 800, seed=2) + 10.0
        model = fit_ar_ls(x, 1)
        assert model.mean == pytest.approx(10.0, abs=0.3)

    def test_order_errors(self):
        with pytest.raises(OrderError):
            fit_ar_ls(np.arange(5.0), 4)
        with pytest.raises(OrderError):
            fit_ar_ls(np.arange(10.0), 0)

    def test_singular_on_constant_series(self):
        with pytest.raises(SingularFit):
            fit_ar_ls(np.ones(50), 1)


class TestFitYuleWalker:
    def test_order_one_equals_lag_one_autocorrelation(self):
        x = simulate_ar([0.5], GAUSS, 400, seed=7)
        model = fit_ar_yw(x, 1)
        r1 = acf(x, 1).values[0]
        assert model.phi[0] == pytest.approx(r1, rel=1e-12)

    def test_consistent_for_ar1(self):
        x = simulate_ar([0.5], GAUSS, 5000, seed=21)
        model = fit_ar_yw(x, 1)
        assert model.phi[0] == pytest.approx(0.5, abs=0.05)

    def test_agrees_with_least_squares(self):
        x = simulate_ar([0.6, -0.3], GAUSS, 3000, seed=13)
        ls = fit_ar_ls(x, 2)
        yw = fit_ar_yw(x, 2)
        assert np.max(np.abs(ls.phi - yw.phi)) < 0.02

    def test_always_causal(self):
        for seed in range(6):
            x = np.random.default_rng(seed).standard_normal(200)
            model = fit_ar_yw(x, 4)
            assert is_causal(model.phi)

    def test_singular_on_constant_series(self):
        with pytest.raises(SingularFit):
            fit_ar_yw(np.full(50, 3.0), 2)


class TestOrderSelection:
    def test_strong_ar2_signal(self):
        # the criterion never underfits a strong signal and the modal
        # choice is the true order (AIC-family overfit noise aside)
        chosen = [
            select_order_aicc(simulate_ar([0.6, -0.3], GAUSS, 800, seed=seed), 10)
            for seed in range(40)
        ]
        assert min(chosen) >= 2
        assert sum(1 for p in chosen if p == 2) >= 20

    def test_white_noise_prefers_zero(self):
        chosen = [select_order_aicc(GAUSS.draw(500, seed), 6) for seed in range(40)]
        counts = {p: chosen.count(p) for p in set(chosen)}
        assert max(counts, key=counts.get) == 0
        assert counts[0] >= 16

    def test_penalty_increases_with_order(self):
        crits = [_aicc(500, p, 1.0) for p in range(11)]
        assert all(b > a for a, b in zip(crits, crits[1:]))

    def test_guard_on_p_max(self):
        with pytest.raises(OrderError):
            select_order_aicc(np.arange(50.0), 6)


class TestResiduals:
    def test_zero_noise_recursion_gives_zero_residuals(self):
        x = 0.5 ** np.arange(25)
        model = fit_ar_ls(x, 1)
        rec = residuals(model, x)
        assert np.max(np.abs(rec)) < 1e-8

    def test_recompute_matches_fit(self):
        x = simulate_ar([0.5, 0.2], GAUSS, 300, seed=5)
        model = fit_ar_ls(x, 2)
        np.testing.assert_allclose(residuals(model, x), model.residuals, rtol=1e-12)

    def test_zero_phi_gives_centered_tail(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal(100)
        model = ArModel(
            p=2,
            phi=np.zeros(2),
            noise_variance=1.0,
            mean=float(x.mean()),
            method=LEAST_SQUARES,
            residuals=np.zeros(98),
        )
        got = residuals(model, x)
        tail = x[2:]
        np.testing.assert_allclose(got, tail - tail.mean(), rtol=0, atol=1e-12)

    def test_length_mismatch(self):
        x = simulate_ar([0.5], GAUSS, 100, seed=4)
        model = fit_ar_ls(x, 1)
        with pytest.raises(ShapeError):
            residuals(model, x[:50])


class TestSimulate:
    def test_ar0_returns_noise(self):
        draw = GAUSS.draw(130, 42)
        sim = simulate_ar([], GAUSS, 100, burn_in=30, seed=42)
        np.testing.assert_array_equal(sim, draw[30:])

    def test_deterministic_given_seed(self):
        a = simulate_ar([0.5], GAUSS, 200, seed=6)
        b = simulate_ar([0.5], GAUSS, 200, seed=6)
        np.testing.assert_array_equal(a, b)
        c = simulate_ar([0.5], GAUSS, 200, seed=7)
        assert not np.array_equal(a, c)

    def test_stationary_variance_ar1(self):
        x = simulate_ar([0.5], GAUSS, 100_000, seed=15)
        assert x.var() == pytest.approx(1.0 / (1.0 - 0.25), rel=0.05)

    def test_noncausal_rejected(self):
        with pytest.raises(NonCausalError):
            simulate_ar([1.1], GAUSS, 100)

    def test_recursion_definition(self):
        shocks = np.array([1.0, 0.0, 0.0, 2.0])
        out = ar_recursion([0.5], shocks)
        np.testing.assert_allclose(out, [1.0, 0.5, 0.25, 2.125], rtol=1e-12)

    def test_fit_simulate_round_trip(self):
        x = simulate_ar([0.6, -0.3], GAUSS, 8000, seed=33)
        model = fit_ar_ls(x, 2)
        assert np.max(np.abs(model.phi - [0.6, -0.3])) < 5.0 / math.sqrt(8000)

    def test_residual_whiteness_under_truth(self):
        hits = 0
        trials = 20
        for seed in range(trials):
            x = simulate_ar([0.6, -0.3], GAUSS, 1000, seed=100 + seed)
            model = fit_ar_ls(x, 2)
            r1 = acf(model.residuals, 1).values[0]
            if abs(r1) < 3.0 / math.sqrt(998):
                hits += 1
        assert hits >= 0.95 * trials
