import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgt_kernel.summation import compensated_mean, compensated_sum, neumaier_sum, two_sum

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)


def exact(values):
    return float(sum(Fraction(v) for v in values))


class TestTwoSum:
    @given(finite, finite)
    def test_error_free(self, a, b):
        s, e = two_sum(a, b)
        assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


class TestCompensatedSum:
    def test_cancellation(self):
        values = [1e16, 1.0, -1e16] * 10 + [1.0]
        assert compensated_sum(values) == 11.0
        assert neumaier_sum(values) == 11.0
        assert math.fsum(values) == 11.0

    def test_empty(self):
        assert compensated_sum([]) == 0.0

    def test_axis(self, rng):
        a = rng.normal(size=(7, 13))
        np.testing.assert_allclose(compensated_sum(a, axis=0), a.sum(axis=0), rtol=1e-13)
        np.testing.assert_allclose(compensated_sum(a, axis=1), a.sum(axis=1), rtol=1e-13)

    def test_mean(self):
        assert compensated_mean([0.1, 0.2, 0.3]) == pytest.approx(0.2, abs=1e-16)

    def test_nonfinite_propagates(self):
        assert math.isnan(compensated_sum([1.0, math.nan]))
        assert compensated_sum([1.0, math.inf]) == math.inf
        out = compensated_sum(np.array([[1.0, 2.0], [math.inf, 1.0]]), axis=1)
        assert out[0] == 3.0 and out[1] == math.inf

    @settings(max_examples=200)
    @given(st.lists(finite, min_size=1, max_size=60))
    def test_close_to_exact(self, values):
        ref = exact(values)
        scale = math.fsum(abs(v) for v in values)
        assert abs(compensated_sum(values) - ref) <= 4e-16 * abs(ref) + 1e-30 * scale + 1e-300
        assert abs(neumaier_sum(values) - ref) <= 4e-16 * abs(ref) + 1e-15 * scale * 1e-10 + 1e-300
