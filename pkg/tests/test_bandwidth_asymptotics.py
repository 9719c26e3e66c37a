import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fgt_kernel import asymptotic_variance, efficiency, gaussian_kernel, true_fgt
from fgt_kernel.asymptotics import empirical_variance_limit
from fgt_kernel.bandwidth import (
    consistency_regime,
    default_bandwidth,
    lil_bandwidth,
    regime_note,
    resolve_bandwidth,
)
from fgt_kernel.exceptions import DegenerateCaseError, InvalidParameterError, NegativeVarianceWarning


class TestBandwidth:
    def test_default(self):
        assert default_bandwidth(1000) == pytest.approx(0.012031825601340968, rel=1e-14)
        assert default_bandwidth(1000) == pytest.approx((1000 * math.log(1000)) ** -0.5)

    def test_lil(self):
        assert lil_bandwidth(1000) == pytest.approx(0.2096708, abs=1e-7)
        assert lil_bandwidth(10**6) == pytest.approx(0.0402546, abs=1e-7)

    @pytest.mark.parametrize("n", [0, 1])
    def test_default_small_n(self, n):
        with pytest.raises(InvalidParameterError):
            default_bandwidth(n)

    def test_lil_small_n(self):
        with pytest.raises(InvalidParameterError):
            lil_bandwidth(2)

    @given(st.integers(3, 10**8))
    def test_decreasing(self, n):
        assert default_bandwidth(n + 1) < default_bandwidth(n)
        assert 0 < lil_bandwidth(n)

    def test_resolve(self):
        assert resolve_bandwidth("nlogn", 1000) == default_bandwidth(1000)
        assert resolve_bandwidth("lil", 1000) == lil_bandwidth(1000)
        assert resolve_bandwidth("fixed", 1000, 0.05) == 0.05
        with pytest.raises(InvalidParameterError):
            resolve_bandwidth("fixed", 1000)
        with pytest.raises(InvalidParameterError):
            resolve_bandwidth("silverman", 1000)

    def test_regime(self):
        # under the nlogn rule n h^2 / ln ln n = 1 / (ln n ln ln n)
        n = 1000
        expected = 1 / (math.log(n) * math.log(math.log(n)))
        assert consistency_regime(n, default_bandwidth(n)) == pytest.approx(expected, rel=1e-12)
        assert consistency_regime(10**6, lil_bandwidth(10**6)) > consistency_regime(1000, lil_bandwidth(1000))
        assert "does not" in regime_note("nlogn", n, default_bandwidth(n))
        assert regime_note("lil", n, lil_bandwidth(n)) is None


class TestAsymptotics:
    def test_variance_example(self, gauss):
        with pytest.warns(NegativeVarianceWarning):
            v = asymptotic_variance(gauss, 0.5, 0.5)
        assert v == pytest.approx(-0.10895260411306093, abs=1e-15)

    def test_zero(self, gauss):
        assert asymptotic_variance(gauss, 0.0, 0.0) == 0.0

    def test_uniform_closed_form(self, gauss, uniform):
        p1, p2 = true_fgt(uniform, 0.5, 1), true_fgt(uniform, 0.5, 2)
        assert p1 == pytest.approx(0.25, abs=1e-12)
        assert p2 == pytest.approx(1 / 6, abs=1e-12)
        with pytest.warns(NegativeVarianceWarning):
            v = asymptotic_variance(gauss, p1, p2)
        assert v == pytest.approx(-0.015484201371020308, abs=1e-12)

    def test_positive_value_no_warning(self, gauss, recwarn):
        assert asymptotic_variance(gauss, 0.01, 0.009) > 0
        assert not [w for w in recwarn if issubclass(w.category, NegativeVarianceWarning)]

    def test_degenerate(self, gauss):
        with pytest.raises(DegenerateCaseError):
            efficiency(gauss, 1.0, 1.0)
        with pytest.raises(DegenerateCaseError):
            efficiency(gauss, 0.0, 0.0)

    def test_efficiency_example(self, gauss):
        assert efficiency(gauss, 0.5, 0.4) == pytest.approx(-0.9144138886029914, rel=1e-13)

    def test_unit_square_integral(self, gauss):
        flat = gauss.__class__(**{**gauss.__dict__, "square_integral": 1.0})
        assert efficiency(flat, 0.3, 0.2) == pytest.approx(1.0, rel=1e-15)

    def test_empirical_limit(self):
        assert empirical_variance_limit(0.5, 0.5) == 0.25

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_efficiency_below_one(self, a, b):
        p1, p2 = max(a, b), min(a, b)  # P(z, 2a) <= P(z, a)
        p2 = max(p2, p1 * p1)  # Jensen: P(z, 2a) >= P(z, a)^2
        if p2 - p1 * p1 <= 1e-12:
            return
        assert efficiency(gaussian_kernel(), p1, p2) < 1
