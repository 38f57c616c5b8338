"""Tests for the Gaussian payoff model and its quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.gaussian_model import (
    GaussianParams, PayoffSpec, QuadratureConfig, expected_loss, expected_net_payoff,
    expected_return_ratio, expected_win, gaussian_pdf, integrate,
    investor_payoff_fraction, truncated_mass,
)
from src.truncated_normal import (
    closed_form_expected_loss, closed_form_expected_win, closed_form_return_ratio,
    gaussian_mass,
)
from src.utils import DegenerateRegimeError, DomainError, NumericalError

rates = st.floats(0.0, 1.0)
means = st.floats(-0.1, 0.1)
sigmas = st.floats(0.1, 0.5)
wide_means = st.floats(-0.95, 0.95)
narrow_sigmas = st.floats(1e-4, 0.05)


# ============================================================
# Value types
# ============================================================

class TestValueTypes:
    @pytest.mark.parametrize("mu, sigma", [(0.0, 0.0), (0.0, -0.1), (1.0, 0.25), (-1.2, 0.25),
                                           (float("nan"), 0.25)])
    def test_invalid_params(self, mu, sigma):
        with pytest.raises(DomainError):
            GaussianParams(mu=mu, sigma=sigma)

    @pytest.mark.parametrize("kwargs", [
        {"interest": -0.1},
        {"interest": 1.5},
        {"lower_bound": 0.5},
        {"win_form": "uncapped"},
    ])
    def test_invalid_spec(self, kwargs):
        with pytest.raises(DomainError):
            PayoffSpec(**kwargs)

    def test_for_interest_clamps_to_upper_bound(self):
        assert PayoffSpec.for_interest(1.6).interest == 1.0
        assert PayoffSpec.for_interest(0.3).interest == 0.3
        with pytest.raises(DomainError):
            PayoffSpec.for_interest(-0.01)

    def test_invalid_quadrature(self):
        with pytest.raises(DomainError):
            QuadratureConfig(abs_tol=0.0)
        with pytest.raises(DomainError):
            QuadratureConfig(max_subdivisions=0)


# ============================================================
# Density and payoff
# ============================================================

class TestDensityAndPayoff:
    def test_peak(self, fair_params):
        assert gaussian_pdf(0.0, fair_params) == pytest.approx(1.59577, abs=1e-5)

    def test_one_sigma(self, fair_params):
        peak = gaussian_pdf(0.0, fair_params)
        assert gaussian_pdf(0.25, fair_params) == pytest.approx(peak * math.exp(-0.5))

    def test_shift_invariance(self, fair_params, rigged_params):
        assert gaussian_pdf(0.05, rigged_params) == pytest.approx(gaussian_pdf(0.0, fair_params))

    def test_vectorised(self, fair_params):
        x = np.linspace(-1, 1, 5)
        assert gaussian_pdf(x, fair_params).shape == (5,)

    def test_payoff_capped(self, capped_20):
        assert investor_payoff_fraction(0.5, capped_20) == pytest.approx(0.2)
        assert investor_payoff_fraction(0.1, capped_20) == pytest.approx(0.1)
        assert investor_payoff_fraction(-0.3, capped_20) == pytest.approx(-0.3)
        assert investor_payoff_fraction(-1.4, capped_20) == pytest.approx(-1.0)


# ============================================================
# Quadrature
# ============================================================

class TestIntegrate:
    def test_constant(self):
        assert integrate(lambda x: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_odd_function(self):
        assert abs(integrate(lambda x: x, -1.0, 1.0)) < 1e-12

    def test_density_mass(self, fair_params):
        mass = integrate(lambda x: gaussian_pdf(x, fair_params), -1.0, 1.0)
        assert mass == pytest.approx(0.99994, abs=1e-6)
        assert truncated_mass(fair_params) == pytest.approx(gaussian_mass(-1, 1, 0.0, 0.25), abs=1e-10)

    def test_empty_interval(self):
        assert integrate(lambda x: 1.0, 0.5, 0.5) == 0.0

    def test_reversed_limits(self):
        with pytest.raises(DomainError):
            integrate(lambda x: 1.0, 1.0, 0.0)

    def test_budget_exhausted_attaches_estimate(self):
        q = QuadratureConfig(abs_tol=1e-14, max_subdivisions=1)
        with pytest.raises(NumericalError) as info:
            integrate(lambda x: math.sin(1000.0 * x), 0.0, 10.0, q)
        assert math.isfinite(info.value.estimate)
        assert info.value.error_bound > 1e-14

    def test_deterministic(self, fair_params):
        f = lambda x: x * gaussian_pdf(x, fair_params)  # noqa: E731
        assert integrate(f, 0.0, 0.37) == integrate(f, 0.0, 0.37)

    @pytest.mark.parametrize("mu", [0.0, 0.05, 0.1])
    def test_normalization_near_one(self, mu):
        assert abs(truncated_mass(GaussianParams(mu=mu, sigma=0.25)) - 1.0) < 1e-4


# ============================================================
# Expectations
# ============================================================

class TestExpectations:
    def test_win_at_full_interest(self, fair_params):
        assert expected_win(PayoffSpec(interest=1.0), fair_params) == pytest.approx(0.09974, abs=1e-4)

    def test_win_at_zero_interest(self, fair_params):
        assert expected_win(PayoffSpec(interest=0.0), fair_params) == 0.0

    def test_win_at_20pct(self, fair_params, capped_20):
        assert expected_win(capped_20, fair_params) == pytest.approx(0.0697, abs=1e-3)

    def test_loss(self, fair_params, rigged_params):
        assert expected_loss(fair_params) == pytest.approx(0.09974, abs=1e-4)
        assert expected_loss(rigged_params) == pytest.approx(0.0768, abs=1e-3)
        assert expected_loss(GaussianParams(mu=0.99, sigma=0.25)) < 1e-3

    def test_fair_game_breaks_even_at_full_interest(self, fair_params):
        assert abs(expected_return_ratio(PayoffSpec(interest=1.0), fair_params)) < 5e-3

    def test_rigged_game_loses_at_15pct(self, rigged_params):
        ratio = expected_return_ratio(PayoffSpec(interest=0.15), rigged_params)
        assert ratio < 0
        assert ratio == pytest.approx(-0.10, abs=0.01)

    def test_ratio_at_20pct(self, fair_params, capped_20):
        assert expected_return_ratio(capped_20, fair_params) == pytest.approx(-0.30, abs=0.01)

    def test_ratio_at_zero_interest(self, fair_params):
        assert expected_return_ratio(PayoffSpec(interest=0.0), fair_params) == -1.0

    def test_net_payoff(self, fair_params, capped_20):
        assert abs(expected_net_payoff(PayoffSpec(interest=1.0), fair_params)) < 5e-3
        assert expected_net_payoff(capped_20, fair_params) == pytest.approx(-0.0300, abs=1e-3)
        assert expected_net_payoff(PayoffSpec(interest=0.0), fair_params) == pytest.approx(
            -0.09974, abs=1e-4)

    def test_degenerate_regime(self):
        params = GaussianParams(mu=0.99, sigma=0.01)
        with pytest.raises(DegenerateRegimeError):
            expected_return_ratio(PayoffSpec(interest=0.2), params)

    def test_as_printed_drops_cap_weight(self, fair_params):
        capped = expected_win(PayoffSpec(interest=0.2), fair_params)
        printed = expected_win(PayoffSpec(interest=0.2, win_form="as_printed"), fair_params)
        assert printed > capped
        expected = closed_form_expected_win(0.2, 0.0, 0.25, capped=False)
        assert printed == pytest.approx(expected, abs=1e-8)

    def test_as_printed_at_zero_interest(self, fair_params):
        printed = expected_win(PayoffSpec(interest=0.0, win_form="as_printed"), fair_params)
        assert printed == pytest.approx(gaussian_mass(0.0, 1.0, 0.0, 0.25), abs=1e-8)

    def test_renormalize_divides_by_mass(self, rigged_params):
        raw = expected_win(PayoffSpec(interest=0.3), rigged_params)
        renorm = expected_win(PayoffSpec(interest=0.3, renormalize=True), rigged_params)
        assert renorm == pytest.approx(raw / truncated_mass(rigged_params), abs=1e-10)
        assert renorm > raw


class TestNarrowDensity:
    @pytest.mark.parametrize("mu", [-0.9, -0.3])
    def test_spike_far_from_kinks(self, mu):
        params = GaussianParams(mu=mu, sigma=0.001)
        spec = PayoffSpec(interest=0.2)
        assert expected_loss(params) == pytest.approx(closed_form_expected_loss(mu, 0.001), abs=1e-8)
        assert expected_loss(params) == pytest.approx(-mu, abs=1e-6)
        assert expected_net_payoff(spec, params) == pytest.approx(mu, abs=1e-6)
        assert expected_return_ratio(spec, params) == pytest.approx(-1.0, abs=1e-8)
        assert truncated_mass(params) == pytest.approx(1.0, abs=1e-8)

    def test_spike_above_interest(self):
        params = GaussianParams(mu=0.6, sigma=0.002)
        win = expected_win(PayoffSpec(interest=0.2), params)
        assert win == pytest.approx(closed_form_expected_win(0.2, 0.6, 0.002), abs=1e-8)
        assert win == pytest.approx(0.2, abs=1e-8)


# ============================================================
# Properties
# ============================================================

class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(rates, means, sigmas)
    def test_matches_closed_form(self, interest, mu, sigma):
        params = GaussianParams(mu=mu, sigma=sigma)
        spec = PayoffSpec(interest=interest)
        assert abs(expected_win(spec, params) - closed_form_expected_win(interest, mu, sigma)) <= 1e-8
        assert abs(expected_loss(params) - closed_form_expected_loss(mu, sigma)) <= 1e-8
        assert abs(expected_return_ratio(spec, params)
                   - closed_form_return_ratio(interest, mu, sigma)) <= 1e-6

    @settings(max_examples=80, deadline=None)
    @given(rates, wide_means, narrow_sigmas)
    def test_narrow_densities_match_closed_form(self, interest, mu, sigma):
        q = QuadratureConfig()
        params = GaussianParams(mu=mu, sigma=sigma)
        spec = PayoffSpec(interest=interest)
        win = expected_win(spec, params, q)
        loss = expected_loss(params, q)
        assert abs(win - closed_form_expected_win(interest, mu, sigma)) <= 1e-8
        assert abs(loss - closed_form_expected_loss(mu, sigma)) <= 1e-8
        assert abs(truncated_mass(params, q=q) - gaussian_mass(-1.0, 1.0, mu, sigma)) <= 1e-8
        assert abs(expected_net_payoff(spec, params, q) - (win - loss)) <= 1e-8

    @settings(max_examples=60, deadline=None)
    @given(rates, means, sigmas)
    def test_net_equals_win_minus_loss(self, interest, mu, sigma):
        q = QuadratureConfig()
        params = GaussianParams(mu=mu, sigma=sigma)
        spec = PayoffSpec(interest=interest)
        direct = expected_net_payoff(spec, params, q)
        split = expected_win(spec, params, q) - expected_loss(params, q)
        assert abs(direct - split) <= 2 * q.abs_tol

    @settings(max_examples=40, deadline=None)
    @given(rates, rates, means)
    def test_monotone_in_interest(self, a, b, mu):
        lo, hi = sorted((a, b))
        params = GaussianParams(mu=mu, sigma=0.25)
        assert (expected_return_ratio(PayoffSpec(interest=hi), params)
                >= expected_return_ratio(PayoffSpec(interest=lo), params) - 1e-9)

    @settings(max_examples=40, deadline=None)
    @given(rates, means, means)
    def test_monotone_in_mu(self, interest, a, b):
        lo, hi = sorted((a, b))
        spec = PayoffSpec(interest=interest)
        assert (expected_return_ratio(spec, GaussianParams(mu=hi, sigma=0.25))
                >= expected_return_ratio(spec, GaussianParams(mu=lo, sigma=0.25)) - 1e-9)

    @settings(max_examples=40, deadline=None)
    @given(rates, means, sigmas)
    def test_sign_agreement(self, interest, mu, sigma):
        params = GaussianParams(mu=mu, sigma=sigma)
        spec = PayoffSpec(interest=interest)
        ratio = expected_return_ratio(spec, params)
        net = expected_net_payoff(spec, params)
        if abs(net) > 1e-9:
            assert math.copysign(1, ratio) == math.copysign(1, net)
