import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from fgt_kernel.exceptions import NumericalFailureError
from fgt_kernel.quadrature import integrate


class TestIntegrate:
    @pytest.mark.parametrize(
        "func, a, b",
        [
            (np.sin, 0.0, math.pi),
            (lambda x: np.exp(-x * x), -3.0, 2.0),
            (lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0),
            (lambda x: np.where(x < 0.4, 1.0, 2.0), 0.0, 1.0),
        ],
    )
    def test_matches_scipy(self, func, a, b):
        value, err = integrate(func, a, b, tol=1e-11, breakpoints=[0.3, 0.4])
        ref, _ = sp_integrate.quad(lambda t: float(func(np.array(t))), a, b,
                                   points=[p for p in (0.3, 0.4) if a < p < b],
                                   epsabs=1e-13, epsrel=1e-13, limit=500)
        assert value == pytest.approx(ref, abs=1e-10)
        assert err <= 1e-11

    def test_endpoint_singularity(self):
        # integral of x**-1/2 on [1e-8, 1] is 2 * (1 - 1e-4)
        value, _ = integrate(lambda x: x ** -0.5, 1e-8, 1.0, tol=1e-11)
        assert value == pytest.approx(1.9998, abs=1e-10)

    def test_polynomial_exact(self):
        value, _ = integrate(lambda x: 3 * x ** 2, 0.0, 2.0)
        assert value == pytest.approx(8.0, abs=1e-14)

    def test_reversed_and_empty(self):
        assert integrate(np.cos, 1.0, 0.0)[0] == pytest.approx(-math.sin(1.0), abs=1e-13)
        assert integrate(np.cos, 1.0, 1.0) == (0.0, 0.0)

    def test_failure_carries_estimate(self):
        with pytest.raises(NumericalFailureError) as info:
            integrate(lambda x: np.sin(1.0 / x), 1e-6, 1.0, tol=1e-14, max_depth=3)
        assert info.value.estimate is not None
        assert math.isfinite(info.value.estimate)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            integrate(np.sin, 0, 1, tol=0)
