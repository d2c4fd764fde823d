import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fragrisk import GrowthSpec, capacity_at, crossover, erf_value
from fragrisk.verify import erf_quadrature


class TestErfValue:
    def test_zero(self):
        assert erf_value(0.0) == 0.0

    def test_reference_point(self):
        assert erf_value(1.0) == pytest.approx(0.8427007929497148, rel=1e-12)

    def test_saturation(self):
        assert abs(erf_value(6.0) - 1.0) <= 1e-7
        assert erf_value(30.0) == 1.0
        assert erf_value(-30.0) == -1.0

    def test_odd_bitwise(self):
        for x in np.linspace(0.0, 6.0, 101):
            assert erf_value(-float(x)) == -erf_value(float(x))

    def test_range_bounds(self):
        for x in np.linspace(-8.0, 8.0, 201):
            assert -1.0 <= erf_value(float(x)) <= 1.0

    def test_against_quadrature_oracle(self):
        for x in np.linspace(-6.0, 6.0, 61):
            reference = erf_quadrature(float(x))
            if reference == 0.0:
                assert erf_value(float(x)) == 0.0
            else:
                assert abs(erf_value(float(x)) - reference) / abs(reference) <= 1e-7

    def test_against_platform_erf(self):
        # extra sanity on top of the quadrature oracle
        for x in np.linspace(-6.0, 6.0, 241):
            assert erf_value(float(x)) == pytest.approx(math.erf(float(x)), rel=1e-12, abs=1e-300)

    def test_nan_propagates(self):
        assert math.isnan(erf_value(float("nan")))


class TestGrowthSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            GrowthSpec.sigmoid(0.0)
        with pytest.raises(ValueError):
            GrowthSpec.linear(0)
        with pytest.raises(ValueError):
            GrowthSpec("cubic")


class TestCapacityAt:
    def test_sigmoid_starts_at_zero(self):
        assert capacity_at(GrowthSpec.sigmoid(100.0), 0.0) == 0.0

    def test_linear_multiplication(self):
        assert capacity_at(GrowthSpec.linear(48), 10.0) == 480.0

    def test_sigmoid_near_saturation(self):
        assert capacity_at(GrowthSpec.sigmoid(100.0), 3.0) == pytest.approx(99.99779, abs=1e-4)

    def test_negative_units_rejected(self):
        with pytest.raises(ValueError):
            capacity_at(GrowthSpec.sigmoid(100.0), -1.0)
        with pytest.raises(ValueError):
            capacity_at(GrowthSpec.linear(48), -0.1)

    @given(units=st.floats(0.0, 1000.0))
    @settings(max_examples=300)
    def test_sigmoid_bounded_by_saturation(self, units):
        assert capacity_at(GrowthSpec.sigmoid(100.0), units) <= 100.0

    def test_sigmoid_monotone(self):
        # nondecreasing up to 1-ulp series noise in the flat saturated region
        sig = GrowthSpec.sigmoid(250.0)
        values = [capacity_at(sig, u) for u in np.linspace(0.0, 10.0, 200)]
        assert all(b >= a * (1.0 - 1e-14) for a, b in zip(values, values[1:]))
        strict = [capacity_at(sig, u) for u in np.linspace(0.0, 3.0, 100)]
        assert all(a < b for a, b in zip(strict, strict[1:]))


class TestCrossover:
    def test_equal_rates_cross_below_one(self):
        # linear slope 100 < initial sigmoid slope 100*2/sqrt(pi), so the
        # crossover is positive but erf(1) < 1 forces it at or below 1
        u = crossover(GrowthSpec.sigmoid(100.0), GrowthSpec.linear(100))
        assert 0.0 < u <= 1.0
        assert capacity_at(GrowthSpec.linear(100), 1.0) >= capacity_at(GrowthSpec.sigmoid(100.0), 1.0)

    def test_slow_linear_crosses_near_saturation(self):
        u = crossover(GrowthSpec.sigmoid(100.0), GrowthSpec.linear(1))
        assert 99.0 <= u <= 101.0

    def test_steep_linear_crosses_at_zero(self):
        assert crossover(GrowthSpec.sigmoid(100.0), GrowthSpec.linear(200)) == 0.0

    def test_crossover_point_separates(self):
        sig, lin = GrowthSpec.sigmoid(100.0), GrowthSpec.linear(7)
        u = crossover(sig, lin)
        assert capacity_at(lin, u + 1e-6) >= capacity_at(sig, u + 1e-6)
        assert capacity_at(lin, u * 0.5) < capacity_at(sig, u * 0.5)

    def test_linear_dominates_far_beyond(self):
        sig, lin = GrowthSpec.sigmoid(100.0), GrowthSpec.linear(3)
        u = crossover(sig, lin)
        assert capacity_at(lin, 10.0 * u) >= capacity_at(sig, 10.0 * u)

    def test_kind_mismatch_rejected(self):
        with pytest.raises(ValueError):
            crossover(GrowthSpec.linear(48), GrowthSpec.sigmoid(100.0))
