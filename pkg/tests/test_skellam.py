import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from skellam_odds import (
    DomainError,
    DegenerateInputError,
    InflationKind,
    InflationModel,
    ScoreDiffDist,
    ScoringRates,
    bessel_i,
    draw_prob_even,
    inflate,
    outcome_probs,
    prob_draw,
    prob_lose,
    prob_win,
    skellam_dist,
    skellam_moments,
    skellam_pmf,
)

from conftest import TABLE2_SKELLAM
from oracles import bessel_i0_at_2_exact, bessel_series_mp, skellam_convolution

rates_st = st.floats(min_value=0.01, max_value=10.0, allow_nan=False)


class TestBessel:
    def test_zero_argument(self):
        assert bessel_i(0, 0.0) == 1.0
        assert bessel_i(1, 0.0) == 0.0
        assert bessel_i(7, 0.0) == 0.0

    def test_i0_at_2_matches_exact_rational_series(self):
        expected = bessel_i0_at_2_exact()
        assert bessel_i(0, 2.0) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("order", [0, 1, 2, 5, 12, 30])
    @pytest.mark.parametrize("x", [0.1, 1.0, 4.7, 12.0, 20.0, 40.0])
    def test_matches_extended_precision(self, order, x):
        assert bessel_i(order, x) == pytest.approx(bessel_series_mp(order, x), rel=1e-14)

    def test_agrees_with_scipy(self):
        from scipy.special import iv

        for order in range(0, 25):
            for x in (0.3, 2.0, 9.9, 20.0):
                assert bessel_i(order, x) == pytest.approx(iv(order, x), rel=1e-13)

    @pytest.mark.parametrize("order,x", [(-1, 1.0), (0, -0.5), (2, math.inf), (0, math.nan)])
    def test_domain_errors(self, order, x):
        with pytest.raises(DomainError):
            bessel_i(order, x)


class TestPmf:
    def test_table2_draw(self):
        # published Skellam draw probability 19.50% at (2.33, 1.44)
        assert skellam_pmf(0, ScoringRates(2.33, 1.44)) == pytest.approx(0.1950, abs=5e-4)

    def test_table2_row(self):
        rates = ScoringRates(2.33, 1.44)
        for x, pct in zip(range(-4, 6), TABLE2_SKELLAM):
            assert skellam_pmf(x, rates) == pytest.approx(pct / 100, abs=5e-4)

    @given(lam=rates_st, x=st.integers(-20, 20))
    def test_equal_rates_symmetric(self, lam, x):
        r = ScoringRates(lam, lam)
        assert skellam_pmf(x, r) == pytest.approx(skellam_pmf(-x, r), rel=1e-13, abs=1e-300)

    @given(a=rates_st, b=rates_st, x=st.integers(-20, 20))
    def test_swap_symmetry(self, a, b, x):
        assert skellam_pmf(x, ScoringRates(a, b)) == pytest.approx(
            skellam_pmf(-x, ScoringRates(b, a)), rel=1e-13, abs=1e-300
        )

    @settings(max_examples=300)
    @given(a=rates_st, b=rates_st, x=st.integers(-20, 20))
    def test_convolution_oracle(self, a, b, x):
        assert abs(skellam_pmf(x, ScoringRates(a, b)) - skellam_convolution(x, a, b)) <= 1e-12

    @pytest.mark.parametrize("a,b", [(0.1, 0.1), (2.33, 1.44), (10.0, 10.0), (10.0, 0.2)])
    def test_normalized_within_60(self, a, b):
        total = math.fsum(skellam_pmf(x, ScoringRates(a, b)) for x in range(-60, 61))
        assert total >= 1 - 1e-12

    def test_one_rate_zero_is_poisson(self):
        from scipy.stats import poisson

        for x in range(-3, 12):
            assert skellam_pmf(x, ScoringRates(2.5, 0.0)) == pytest.approx(poisson.pmf(x, 2.5), abs=1e-15)
            assert skellam_pmf(x, ScoringRates(0.0, 2.5)) == pytest.approx(poisson.pmf(-x, 2.5), abs=1e-15)

    def test_both_zero_is_point_mass(self):
        r = ScoringRates(0.0, 0.0)
        assert skellam_pmf(0, r) == 1.0
        assert skellam_pmf(1, r) == skellam_pmf(-2, r) == 0.0

    @pytest.mark.parametrize("a,b", [(-0.1, 1.0), (1.0, math.inf), (math.nan, 1.0)])
    def test_invalid_rates(self, a, b):
        with pytest.raises(DomainError):
            ScoringRates(a, b)


class TestDist:
    def test_zero_rates(self):
        d = skellam_dist(ScoringRates(0, 0))
        assert d.as_dict() == {0: 1.0}

    def test_support_and_pointwise(self):
        rates = ScoringRates(2.33, 1.44)
        d = skellam_dist(rates, 1e-9)
        assert d.k_min <= -10 and d.k_max >= 12
        raw = np.array([skellam_pmf(int(k), rates) for k in d.support])
        # renormalization changed the mass by less than tail_eps
        np.testing.assert_allclose(d.probs, raw / raw.sum(), rtol=1e-14)
        np.testing.assert_allclose(d.probs, raw, rtol=1e-9)
        assert abs(1 - raw.sum()) < 1e-9

    def test_window_is_symmetric_about_mode_and_minimal(self):
        rates = ScoringRates(2.33, 1.44)
        d = skellam_dist(rates, 1e-9)
        mode = int(d.support[np.argmax(d.probs)])
        assert mode - d.k_min == d.k_max - mode
        r = mode - d.k_min - 1
        inner = math.fsum(skellam_pmf(k, rates) for k in range(mode - r, mode + r + 1))
        assert 1 - inner >= 1e-9

    @given(a=st.floats(0, 8), b=st.floats(0, 8))
    def test_total_mass(self, a, b):
        d = skellam_dist(ScoringRates(a, b))
        assert math.fsum(d.probs) == pytest.approx(1.0, abs=1e-12)

    def test_poisson_limit_dist(self):
        d = skellam_dist(ScoringRates(0.0, 1.7))
        assert d.k_max <= 0 or d.pmf(1) == 0.0
        assert d.moments()[0] == pytest.approx(-1.7, abs=1e-8)

    def test_bad_tail_eps(self):
        with pytest.raises(DomainError):
            skellam_dist(ScoringRates(1, 1), 0.0)


class TestOutcomes:
    def test_even_teams(self):
        r = ScoringRates(1.3, 1.3)
        assert prob_win(r) == pytest.approx(prob_lose(r), abs=1e-12)

    def test_pre_match_win(self):
        # published Skellam row summed over 1..5 plus the model tail beyond +5
        r = ScoringRates(2.33, 1.44)
        tail = math.fsum(skellam_pmf(x, r) for x in range(6, 80))
        oracle = sum(TABLE2_SKELLAM[5:]) / 100 + tail
        assert oracle == pytest.approx(0.5746, abs=1e-4)
        assert prob_win(r) == pytest.approx(oracle, abs=5e-3)

    @given(a=st.floats(0, 6), b=st.floats(0, 6), lead=st.integers(-4, 4))
    def test_partition(self, a, b, lead):
        w, d, l = outcome_probs(ScoringRates(a, b), lead)
        assert w + d + l == pytest.approx(1.0, abs=1e-12)
        assert min(w, d, l) >= 0.0

    def test_lead_shifts_draw(self):
        r = ScoringRates(0.8, 0.6)
        assert prob_draw(r, 1) == skellam_pmf(-1, r)
        assert prob_win(r, 1) == pytest.approx(math.fsum(skellam_pmf(x, r) for x in range(0, 60)), abs=1e-12)

    def test_finished_game(self):
        r = ScoringRates(0, 0)
        assert outcome_probs(r, 2) == (1.0, 0.0, 0.0)
        assert outcome_probs(r, 0) == (0.0, 1.0, 0.0)


class TestDrawEven:
    def test_zero(self):
        assert draw_prob_even(0.0) == 1.0

    def test_monotone_coarse_grid(self):
        grid = [round(0.1 * k, 1) for k in range(1, 51)]
        vals = [draw_prob_even(x) for x in grid]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_consistent_with_pmf(self):
        assert draw_prob_even(1.8) == pytest.approx(skellam_pmf(0, ScoringRates(1.8, 1.8)), abs=1e-15)

    def test_series_form(self):
        # sum_k (lam^k e^-lam / k!)^2
        lam = 1.25
        series = math.fsum((lam**k * math.exp(-lam) / math.factorial(k)) ** 2 for k in range(60))
        assert draw_prob_even(lam) == pytest.approx(series, rel=1e-13)


class TestMoments:
    def test_example(self):
        assert skellam_moments(ScoringRates(1.5, 1.2), 0) == pytest.approx((0.3, 2.7))

    def test_zero(self):
        assert skellam_moments(ScoringRates(0, 0), 3) == (3, 0)

    @given(a=st.floats(0, 8), b=st.floats(0, 8), lead=st.integers(-3, 3))
    def test_materialized(self, a, b, lead):
        mean, var = skellam_dist(ScoringRates(a, b), 1e-12).shifted(lead).moments()
        m, v = skellam_moments(ScoringRates(a, b), lead)
        assert mean == pytest.approx(m, abs=1e-9)
        assert var == pytest.approx(v, abs=1e-9)


class TestInflate:
    base = ScoreDiffDist.from_mapping({-1: 0.3, 0: 0.4, 1: 0.3})

    def test_type_one_example(self):
        out = inflate(self.base, InflationModel(InflationKind.TYPE_ONE, 0.1))
        assert out.as_dict() == pytest.approx({-1: 0.27, 0: 0.46, 1: 0.27}, abs=1e-15)

    def test_type_one_small_p_is_identity(self):
        out = inflate(self.base, InflationModel("type1", 1e-15))
        np.testing.assert_allclose(out.probs, self.base.probs, atol=1e-14)

    def test_type_two_zero_theta_is_identity(self):
        model = InflationModel("type2", 0.0)
        assert model.gamma(0.4) == 0.0
        np.testing.assert_array_equal(inflate(self.base, model).probs, self.base.probs)

    def test_type_two_formula(self):
        out = inflate(self.base, InflationModel("type2", 0.5))
        gamma = 0.5 * 0.4 / 0.6
        assert out.pmf(0) == pytest.approx(0.6)
        assert out.pmf(1) == pytest.approx((1 - gamma) * 0.3)
        # the linking identity P0 = gamma / (gamma + theta)
        assert 0.4 == pytest.approx(gamma / (gamma + 0.5))

    def test_none_is_identity(self):
        assert inflate(self.base, InflationModel.none()) is self.base

    def test_zero_outside_support(self):
        d = ScoreDiffDist.from_mapping({1: 0.5, 2: 0.5})
        out = inflate(d, InflationModel("type1", 0.2))
        assert out.as_dict() == pytest.approx({0: 0.2, 1: 0.4, 2: 0.4})

    def test_errors(self):
        with pytest.raises(DomainError):
            InflationModel("type1", 0.0)
        with pytest.raises(DomainError):
            InflationModel("type1", 1.0)
        with pytest.raises(DomainError):
            InflationModel("type2", -0.1)
        with pytest.raises(DegenerateInputError):
            inflate(ScoreDiffDist.point_mass(0), InflationModel("type2", 0.1))
        with pytest.raises(DomainError):
            inflate(self.base, InflationModel("type2", 1.5))

    def test_parse(self):
        assert InflationModel.parse("none") == InflationModel.none()
        assert InflationModel.parse("type1:0.25") == InflationModel(InflationKind.TYPE_ONE, 0.25)
        assert InflationModel.parse("TYPE2:1") == InflationModel(InflationKind.TYPE_TWO, 1.0)
        with pytest.raises(DomainError):
            InflationModel.parse("type3:1")

    @given(
        a=st.floats(0.05, 5),
        b=st.floats(0.05, 5),
        kind=st.sampled_from(["type1", "type2"]),
        factor=st.floats(0.001, 0.9),
    )
    def test_mass_and_ratios_preserved(self, a, b, kind, factor):
        d = skellam_dist(ScoringRates(a, b))
        model = InflationModel(kind, factor)
        if kind == "type2" and model.gamma(d.pmf(0)) >= 1:
            return
        out = inflate(d, model)
        assert math.fsum(out.probs) == pytest.approx(1.0, abs=1e-12)
        mask = (d.support != 0) & (d.probs > 1e-200)
        ratio = out.probs[mask] / d.probs[mask]
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)


class TestScoreDiffDist:
    def test_must_be_normalized(self):
        with pytest.raises(DomainError):
            ScoreDiffDist(0, [0.5, 0.6])

    def test_negative(self):
        with pytest.raises(DomainError):
            ScoreDiffDist(0, [1.5, -0.5])

    def test_immutable(self):
        d = ScoreDiffDist.point_mass(2)
        with pytest.raises(ValueError):
            d.probs[0] = 0.5

    def test_restricted_and_tv(self):
        d = ScoreDiffDist.from_mapping({-1: 0.25, 0: 0.5, 1: 0.25})
        r = d.restricted(0, 1)
        assert r.as_dict() == pytest.approx({0: 2 / 3, 1: 1 / 3})
        assert d.total_variation(d) == 0.0
        assert d.total_variation(ScoreDiffDist.point_mass(5)) == pytest.approx(1.0)
