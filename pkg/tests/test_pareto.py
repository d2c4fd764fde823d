import math
import warnings

import numpy as np
import pytest
from scipy import integrate

from fragrisk import (
    HarmParams,
    ParetoParams,
    degradation_curve,
    degradation_ratio,
    fragment_harm_density,
    mc_tail_mean,
    pareto_density,
    pareto_quantile,
    pareto_sample,
    tail_mean,
)


def quiet_tail_mean(p, h, n):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return tail_mean(p, h, n)


class TestParetoParams:
    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            ParetoParams(alpha=0.0, scale=1.0)
        with pytest.raises(ValueError):
            ParetoParams(alpha=2.0, scale=0.0)


class TestParetoDensity:
    def test_boundary_value(self):
        assert pareto_density(ParetoParams(2.0, 1.0), 1.0) == 2.0

    def test_below_support_is_zero(self):
        assert pareto_density(ParetoParams(2.0, 1.0), 0.5) == 0.0
        assert pareto_density(ParetoParams(2.0, 1.0), -3.0) == 0.0

    def test_interior_value(self):
        assert pareto_density(ParetoParams(1.0, 1.0), 2.0) == 0.25

    def test_integrates_to_one(self):
        p = ParetoParams(2.5, 1.5)
        total, _ = integrate.quad(lambda x: pareto_density(p, x), p.scale, np.inf)
        assert total == pytest.approx(1.0, abs=1e-9)


class TestParetoSample:
    def test_quantile_zero_is_scale(self):
        assert pareto_quantile(ParetoParams(2.0, 3.0), 0.0) == 3.0
        assert pareto_quantile(ParetoParams(5.0, 0.25), 0.0) == 0.25

    def test_quantile_matches_survival(self):
        p = ParetoParams(3.0, 2.0)
        x = pareto_quantile(p, 0.875)  # survival (L/x)^3 = 1/8 at x = 2L
        assert x == pytest.approx(4.0, rel=1e-14)

    def test_support_floor(self):
        x = pareto_sample(ParetoParams(2.0, 3.0), 100_000, seed=1)
        assert float(x.min()) >= 3.0

    def test_mean_matches_analytic(self):
        # E[X] = alpha*L/(alpha-1) = 2 at alpha=2, L=1; sample SE is valid
        # here even though the variance integral sits at its boundary.
        x = pareto_sample(ParetoParams(2.0, 1.0), 10**6, seed=42)
        se = float(x.std(ddof=1)) / math.sqrt(len(x))
        assert abs(float(x.mean()) - 2.0) <= 3.0 * se

    def test_survival_probability(self):
        x = pareto_sample(ParetoParams(3.0, 2.0), 10**6, seed=42)
        frac = float(np.mean(x > 4.0))
        target = (2.0 / 4.0) ** 3
        se = math.sqrt(target * (1.0 - target) / len(x))
        assert abs(frac - target) <= 3.0 * se

    def test_deterministic(self):
        a = pareto_sample(ParetoParams(2.0, 1.0), 1000, seed=7)
        b = pareto_sample(ParetoParams(2.0, 1.0), 1000, seed=7)
        assert np.array_equal(a, b)

    def test_count_validation(self):
        with pytest.raises(ValueError):
            pareto_sample(ParetoParams(2.0, 1.0), 0, seed=7)


class TestFragmentHarmDensity:
    def test_support_boundary_value(self):
        # At the largest attainable harm the density is alpha/(beta*k*L**beta)
        p, h = ParetoParams(2.0, 1.0), HarmParams(1.0, 2.0)
        assert fragment_harm_density(p, h, 1, -1.0) == 1.0

    def test_above_support_zero(self):
        p, h = ParetoParams(2.0, 1.0), HarmParams(1.0, 2.0)
        bound = -(1.0 * (1.0 / 2) ** 2.0)
        assert fragment_harm_density(p, h, 2, bound / 2) == 0.0
        assert fragment_harm_density(p, h, 2, 0.0) == 0.0
        assert fragment_harm_density(p, h, 2, 1.0) == 0.0

    def test_normalization_by_quadrature(self):
        p, h, n = ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5), 2
        bound = -(h.k * (p.scale / n) ** h.beta)
        total, _ = integrate.quad(
            lambda xi: fragment_harm_density(p, h, n, xi), -np.inf, bound, epsabs=1e-10, epsrel=1e-10
        )
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_requires_positive_beta(self):
        with pytest.raises(ValueError):
            fragment_harm_density(ParetoParams(2.0, 1.0), HarmParams(1.0, 0.0), 1, -1.0)

    def test_requires_valid_fragments(self):
        with pytest.raises(ValueError):
            fragment_harm_density(ParetoParams(2.0, 1.0), HarmParams(1.0, 2.0), 0, -1.0)


class TestTailMean:
    def test_closed_form_single_fragment(self):
        assert quiet_tail_mean(ParetoParams(3.0, 1.0), HarmParams(1.0, 1.5), 1) == -2.0

    def test_closed_form_two_fragments(self):
        value = tail_mean(ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5), 2)
        assert value == pytest.approx(-1.6 * 2.0 ** (-7.0 / 3.0), rel=1e-14)
        assert value == pytest.approx(-0.3174802103936399, rel=1e-12)

    def test_linear_harm_fragmentation_neutral(self):
        # beta=1 makes N*tail_mean(N) constant in N
        p, h = ParetoParams(3.0, 1.0), HarmParams(2.0, 1.0)
        base = quiet_tail_mean(p, h, 1)
        for n in (2, 3, 8):
            assert n * quiet_tail_mean(p, h, n) == pytest.approx(base, rel=1e-12)

    def test_always_negative(self):
        for alpha, beta, n in ((4.0, 1.5, 1), (2.5, 2.0, 3), (10.0, 1.0, 5)):
            assert quiet_tail_mean(ParetoParams(alpha, 1.0), HarmParams(1.0, beta), n) < 0

    def test_divergent_requires_alpha_above_beta(self):
        with pytest.raises(ValueError, match="diverges"):
            tail_mean(ParetoParams(1.5, 1.0), HarmParams(1.0, 2.0), 1)
        with pytest.raises(ValueError, match="diverges"):
            tail_mean(ParetoParams(2.0, 1.0), HarmParams(1.0, 2.0), 1)

    def test_warns_between_thresholds(self):
        # converges for alpha > beta but warns until alpha > 1 + beta
        with pytest.warns(UserWarning):
            tail_mean(ParetoParams(2.0, 1.0), HarmParams(1.0, 1.5), 1)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            tail_mean(ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5), 1)


class TestMcTailMean:
    def test_single_trial_matches_manual_draw(self):
        p, h = ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5)
        draw = float(pareto_sample(p, 1, seed=5)[0])
        xi = -(h.k * draw**h.beta)
        expected = xi if xi <= -(h.k * p.scale**h.beta) else 0.0
        assert mc_tail_mean(p, h, 1, 1, seed=5) == expected

    @pytest.mark.parametrize("n", [1, 2])
    def test_converges_to_closed_form(self, n):
        p, h = ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5)
        closed = tail_mean(p, h, n)
        estimate = mc_tail_mean(p, h, n, 10**6, seed=42)
        assert abs(estimate - closed) / abs(closed) <= 0.02

    def test_deterministic(self):
        p, h = ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5)
        assert mc_tail_mean(p, h, 2, 10_000, seed=9) == mc_tail_mean(p, h, 2, 10_000, seed=9)


class TestDegradationRatio:
    def test_identity_multiplier(self):
        assert degradation_ratio(ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5), 1.0, 1) == 1.0

    def test_linear_harm_flat(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for k in (2.0, 5.0, 17.0):
                assert degradation_ratio(ParetoParams(3.0, 1.0), HarmParams(1.0, 1.0), k, 1) == 1.0

    def test_reference_value(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            ratio = degradation_ratio(ParetoParams(2.0, 1.0), HarmParams(1.0, 1.5), 2.0, 1)
        assert ratio == pytest.approx(0.6299605249474366, rel=1e-14)

    def test_matches_tail_mean_ratio(self):
        p, h = ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5)
        for k in (2, 3, 4):
            for n in (1, 2):
                via_means = k * tail_mean(p, h, k * n) / tail_mean(p, h, n)
                assert abs(via_means - degradation_ratio(p, h, float(k), n)) <= 1e-12 * abs(via_means)

    def test_scale_free_in_k_and_l(self):
        rng = np.random.default_rng(0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            reference = degradation_ratio(ParetoParams(2.5, 1.0), HarmParams(1.0, 2.0), 3.0, 1)
            for _ in range(50):
                k = float(rng.uniform(0.01, 100.0))
                scale = float(rng.uniform(0.01, 100.0))
                ratio = degradation_ratio(ParetoParams(2.5, scale), HarmParams(k, 2.0), 3.0, 1)
                assert ratio == reference

    def test_validation(self):
        p, h = ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5)
        with pytest.raises(ValueError):
            degradation_ratio(p, h, 0.0, 1)
        with pytest.raises(ValueError):
            degradation_ratio(p, h, 0.25, 2)  # K*N < 1
        with pytest.raises(ValueError, match="diverges"):
            degradation_ratio(ParetoParams(1.0, 1.0), HarmParams(1.0, 1.5), 2.0, 1)


class TestDegradationCurve:
    def test_reference_curve(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            curve = degradation_curve(ParetoParams(2.0, 1.0), HarmParams(1.0, 1.5), [1.0, 2.0, 4.0, 8.0])
        ratios = [r for _, r in curve]
        assert ratios[0] == 1.0
        assert ratios[1] == pytest.approx(0.63, abs=5e-3)
        assert ratios[2] == pytest.approx(0.397, abs=5e-3)
        assert ratios[3] == pytest.approx(0.25, abs=5e-3)
        assert all(a > b for a, b in zip(ratios, ratios[1:]))

    def test_linear_harm_constant_one(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            curve = degradation_curve(ParetoParams(3.0, 1.0), HarmParams(1.0, 1.0), [1.0, 2.0, 10.0])
        assert [r for _, r in curve] == [1.0, 1.0, 1.0]


class TestHistogramAgainstDensity:
    def test_l1_distance_small(self):
        # 10^5 draws over 50 equal-probability bins; bin masses integrated
        # from the density rather than assumed.
        from fragrisk.verify import histogram_l1_distance

        distance = histogram_l1_distance(
            ParetoParams(4.0, 1.0), HarmParams(1.0, 1.5), 2, samples=10**5, bins=50, seed=42
        )
        assert distance <= 0.05
