import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fgt_kernel import (
    bias_corrected_density,
    classical_density,
    draw_sample,
    gaussian_kernel,
    get_kernel,
    verify_hypotheses,
)
from fgt_kernel.exceptions import EmptySampleError, InvalidBandwidthError, InvalidParameterError
from fgt_kernel.kernels import Kernel, check_moments, second_derivative_density
from fgt_kernel.quadrature import integrate


class TestGaussianKernel:
    def test_closed_forms(self, gauss):
        assert gauss.eval(0.0) == pytest.approx(0.3989422804, abs=1e-10)
        assert gauss.eval_second_derivative(0.0) == pytest.approx(-0.3989422804, abs=1e-10)
        assert gauss.square_integral == pytest.approx(0.2820947918, abs=1e-10)
        assert gauss.second_moment == 1.0

    def test_square_integral_below_one(self, gauss):
        assert gauss.square_integral < 1

    def test_second_derivative_matches_finite_differences(self, gauss):
        u = np.linspace(-5, 5, 41)
        d = 1e-4
        fd = (gauss.eval(u + d) - 2 * gauss.eval(u) + gauss.eval(u - d)) / d ** 2
        np.testing.assert_allclose(gauss.eval_second_derivative(u), fd, atol=1e-7)

    def test_stored_moments_match_quadrature(self, gauss):
        mu2, rk, ok = check_moments(gauss, tol=1e-8)
        assert ok
        assert mu2 == pytest.approx(1.0, abs=1e-8)
        assert rk == pytest.approx(1 / (2 * math.sqrt(math.pi)), abs=1e-8)

    def test_unit_mass(self, gauss):
        value, _ = integrate(gauss.eval, -8, 8, tol=1e-12)
        assert value == pytest.approx(1.0, abs=1e-8)

    def test_registry(self):
        assert get_kernel("gaussian").name == "gaussian"
        assert get_kernel("Gaussian").name == "gaussian"
        with pytest.raises(InvalidParameterError):
            get_kernel("epanechnikov")

    def test_immutable(self, gauss):
        with pytest.raises(AttributeError):
            gauss.second_moment = 2.0


class TestVerifyHypotheses:
    def test_gaussian_passes(self, gauss):
        report = verify_hypotheses(gauss, 1e-6)
        assert report.passed
        for name in ("H1", "H2", "H3", "H4", "H5"):
            assert report.get(name, "K").passed
            assert report.get(name, "K''").passed
        assert report.get("H6").passed is None
        assert "not machine-checkable" in report.get("H6").note

    def test_second_derivative_integrates_to_zero(self, gauss):
        check = verify_hypotheses(gauss, 1e-6).get("H2", "K''")
        assert abs(check.measured) < 1e-12
        assert "0" in check.expected

    def test_truncated_mass(self, gauss):
        check = verify_hypotheses(gaussian_kernel(radius=8.0), 1e-6).get("H2", "K")
        assert check.passed
        expected = 1 - math.erfc(8 / math.sqrt(2))  # 1 - 1.2e-15
        assert check.measured == pytest.approx(expected, abs=1e-14)

    def test_constant_kernel_fails(self):
        const = Kernel("const", lambda u: 1.0, lambda u: 0.0, 1.0, 1.0, 8.0)
        report = verify_hypotheses(const, 1e-6)
        assert not report.passed
        assert not report.get("H2").passed
        assert not report.get("H3").passed

    def test_json(self, gauss):
        import json

        data = json.loads(verify_hypotheses(gauss, 1e-6).to_json())
        assert data["passed"] is True
        assert {c["name"] for c in data["checks"]} == {"H1", "H2", "H3", "H4", "H5", "H6"}

    def test_bad_tol(self, gauss):
        with pytest.raises(InvalidParameterError):
            verify_hypotheses(gauss, 0)


class TestClassicalDensity:
    def test_single_point(self, gauss):
        assert classical_density([0.0], gauss, 1.0, 0.0) == pytest.approx(0.3989422804, abs=1e-10)

    def test_two_points(self, gauss):
        # (K(1) + K(-1)) / 2, direct substitution
        assert classical_density([0.0, 2.0], gauss, 1.0, 1.0) == pytest.approx(0.24197072451914337, abs=1e-14)

    def test_far_tail(self, gauss):
        xs = [0.1, 0.5, 0.9]
        assert classical_density(xs, gauss, 0.05, 0.9 + 10 * 0.05 + 1.0) < 1e-12

    def test_vectorised_matches_oracle(self, gauss, rng):
        xs = rng.uniform(0, 1, 30)
        grid = np.linspace(-0.2, 1.2, 17)
        got = classical_density(xs, gauss, 0.07, grid)
        want = [oracles.kde(list(xs), 0.07, x) for x in grid]
        np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-15)

    def test_errors(self, gauss):
        with pytest.raises(InvalidBandwidthError):
            classical_density([0.1], gauss, 0.0, 0.0)
        with pytest.raises(InvalidBandwidthError):
            classical_density([0.1], gauss, -1.0, 0.0)
        with pytest.raises(EmptySampleError):
            classical_density([], gauss, 1.0, 0.0)


class TestBiasCorrectedDensity:
    def test_single_point(self, gauss):
        # K(0) - 1/2 * K''(0)
        assert bias_corrected_density([0.0], gauss, 1.0, 0.0) == pytest.approx(0.5984134206, abs=1e-10)

    def test_small_bandwidth(self, gauss):
        # K(0)/0.1 - 0.05 * K''(0)
        assert bias_corrected_density([0.0], gauss, 0.1, 0.0) == pytest.approx(4.009369918034398, abs=1e-12)

    def test_matches_oracle(self, gauss, rng):
        xs = list(rng.uniform(0, 1, 25))
        for x in (0.0, 0.3, 0.77, 1.4):
            assert bias_corrected_density(xs, gauss, 0.09, x) == pytest.approx(
                oracles.kde_corrected(xs, 0.09, x), rel=1e-13, abs=1e-15)

    def test_can_be_negative(self, gauss):
        # K''(u) > 0 for |u| > 1, so the correction pushes the estimate below zero
        assert bias_corrected_density([0.0], gauss, 1.0, 2.5) < 0

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.floats(0, 5), min_size=1, max_size=20),
        st.floats(0.01, 3.0),
        st.floats(-1.0, 6.0),
    )
    def test_second_derivative_arrangement(self, xs, h, x):
        g = gaussian_kernel()
        direct = bias_corrected_density(xs, g, h, x)
        # f_hat - h**2/2 * mu2 * (h**2 * f_hat''), with f_hat'' = 1/(n h^3) sum K''
        rearranged = (classical_density(xs, g, h, x)
                      - h * h / 2 * g.second_moment * h * h * second_derivative_density(xs, g, h, x))
        scale = max(1.0, abs(classical_density(xs, g, h, x)))
        assert abs(direct - rearranged) < 1e-12 * scale

    def test_correction_is_order_h(self, gauss, uniform):
        xs = draw_sample(uniform, 2000, seed=3)
        diffs = []
        for h in (0.2, 0.1, 0.05):
            c = classical_density(xs, gauss, h, 0.5)
            diffs.append(abs(bias_corrected_density(xs, gauss, h, 0.5) - c) / c)
        assert diffs[0] > diffs[1] > diffs[2]

    def test_integrates_to_one(self, gauss, uniform):
        xs = draw_sample(uniform, 200, seed=5)
        value, _ = integrate(lambda x: bias_corrected_density(xs, gauss, 0.05, x), -1.0, 2.0, tol=1e-9,
                             breakpoints=np.linspace(-1, 2, 61)[1:-1])
        assert value == pytest.approx(1.0, abs=1e-4)


class TestTranslation:
    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(0, 5), min_size=1, max_size=15),
        st.floats(0.05, 2.0),
        st.floats(0, 5),
        st.floats(0, 10),
    )
    def test_shift_invariance(self, xs, h, x, c):
        g = gaussian_kernel()
        shifted = [v + c for v in xs]
        for density in (classical_density, bias_corrected_density):
            a = density(xs, g, h, x)
            b = density(shifted, g, h, x + c)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a)) / h
