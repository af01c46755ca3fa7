import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbm_teleport.errors import QuadratureError, ValidationError
from qbm_teleport.numerics import (UniformGrid, cumulative_integral, eig_hermitian_2x2,
                                   hermite_lookup, integrate_adaptive)


class TestIntegrateAdaptive:
    def test_zero_integrand(self):
        assert integrate_adaptive(lambda u: 0.0, 0.0, 1.0) == 0.0

    def test_rational_with_known_antiderivative(self):
        # antiderivative -1/(1+u^2): 1 - 1/2501
        value = integrate_adaptive(lambda u: 2 * u / (1 + u * u) ** 2, 0.0, 50.0, 1e-10)
        assert value == pytest.approx(1.0 - 1.0 / 2501.0, abs=1e-10)

    def test_cosine(self):
        assert integrate_adaptive(math.cos, 0.0, math.pi / 2) == pytest.approx(1.0, abs=1e-10)

    def test_degenerate_interval(self):
        assert integrate_adaptive(math.exp, 2.0, 2.0) == 0.0

    def test_reversed_interval_rejected(self):
        with pytest.raises(ValidationError):
            integrate_adaptive(math.cos, 1.0, 0.0)

    def test_bad_tolerance_rejected(self):
        with pytest.raises(ValidationError):
            integrate_adaptive(math.cos, 0.0, 1.0, tol=0.0)

    def test_non_convergence_raises(self):
        with pytest.raises(QuadratureError):
            integrate_adaptive(lambda u: math.sin(1.0 / u) / u ** 2, 1e-6, 1.0, 1e-14)

    def test_deterministic(self):
        f = lambda u: math.exp(-u) * math.sin(7 * u)
        assert integrate_adaptive(f, 0, 5) == integrate_adaptive(f, 0, 5)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(0.0, 1.0), st.floats(0.0, 3.0))
    def test_additive_over_splits(self, a, frac, width):
        f = lambda u: math.exp(-u) * math.cos(5 * u)
        b = a + width
        m = a + frac * width
        tol = 1e-10
        whole = integrate_adaptive(f, a, b, tol)
        parts = integrate_adaptive(f, a, m, tol) + integrate_adaptive(f, m, b, tol)
        assert abs(whole - parts) <= 2 * tol


class TestCumulativeIntegral:
    def test_constant(self):
        out = cumulative_integral(UniformGrid(2.0, np.ones(11)))
        np.testing.assert_allclose(out.values, out.nodes, atol=1e-15)

    def test_zero(self):
        out = cumulative_integral(UniformGrid(1.0, np.zeros(7)))
        assert np.all(out.values == 0.0)

    def test_linear_end_value(self):
        out = cumulative_integral(UniformGrid.sample(lambda t: t, 1.0, 1001))
        assert abs(out.values[-1] - 0.5) < 1e-8

    def test_starts_at_zero(self):
        out = cumulative_integral(UniformGrid.sample(np.exp, 1.0, 8))
        assert out.values[0] == 0.0

    @pytest.mark.parametrize("n", [3, 4, 5, 10, 101])
    def test_exact_for_cubics(self, n):
        out = cumulative_integral(UniformGrid.sample(lambda t: 3 * t ** 2 - t, 1.5, n))
        np.testing.assert_allclose(out.values, out.nodes ** 3 - out.nodes ** 2 / 2, atol=1e-13)

    def test_too_few_nodes(self):
        with pytest.raises(ValidationError):
            cumulative_integral(UniformGrid(1.0, np.ones(2)))

    def test_matrix_valued_samples(self):
        tau = np.linspace(0, 1, 21)
        vals = np.stack([np.stack([tau, 2 * tau], -1), np.stack([0 * tau, np.ones_like(tau)], -1)], -2)
        out = cumulative_integral(UniformGrid(1.0, vals))
        np.testing.assert_allclose(out.values[-1], [[0.5, 1.0], [0.0, 1.0]], atol=1e-14)

    @pytest.mark.parametrize("n", [51, 101, 201])
    def test_recovers_function_from_derivative(self, n):
        grid = UniformGrid.sample(lambda t: 4 * np.cos(4 * t), 2.0, n)
        err = np.max(np.abs(cumulative_integral(grid).values - np.sin(4 * grid.nodes)))
        assert err < 10 * grid.step ** 2


class TestHermiteLookup:
    def test_node_values_returned_exactly(self):
        t = np.linspace(0, 1, 11)
        vals, slopes = np.sin(t), np.cos(t)
        for k in range(11):
            assert hermite_lookup(vals, slopes, 1.0, t[k]) == vals[k]

    def test_fourth_order_accuracy(self):
        t = np.linspace(0, 1, 41)
        q = 0.3137
        approx = hermite_lookup(np.sin(3 * t), 3 * np.cos(3 * t), 1.0, q)
        assert abs(approx - math.sin(3 * q)) < 1e-7


class TestEigHermitian:
    def test_identity(self):
        assert eig_hermitian_2x2(np.eye(2)) == (1.0, 1.0)

    def test_diagonal(self):
        assert eig_hermitian_2x2(np.diag([3.0, -1.0])) == (-1.0, 3.0)

    def test_off_diagonal_imaginary(self):
        lo, hi = eig_hermitian_2x2([[0, 0.5j], [-0.5j, 0]])
        assert lo == pytest.approx(-0.5, abs=1e-15) and hi == pytest.approx(0.5, abs=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            eig_hermitian_2x2([[0, 1.0], [0.0, 0]])

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValidationError):
            eig_hermitian_2x2(np.eye(3))

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_trace_and_determinant(self, a, d, br, bi):
        h = np.array([[a, br + 1j * bi], [br - 1j * bi, d]])
        lo, hi = eig_hermitian_2x2(h)
        assert lo <= hi
        assert lo + hi == pytest.approx(a + d, abs=1e-12)
        assert lo * hi == pytest.approx(a * d - br * br - bi * bi, abs=1e-12 * max(1, a * a + d * d))
