import math

import numpy as np
import pytest

from qbm_teleport.channel import ChannelPair, channel_pair, rotation
from qbm_teleport.errors import GridRangeError, ValidationError
from qbm_teleport.gaussian import OMEGA
from qbm_teleport.non_markovianity import (IntermediateMap, compose, cp_matrix,
                                           intermediate_map, np_closed_form,
                                           np_from_eigenvalues, np_spectral)
from qbm_teleport.numerics import eig_hermitian_2x2


def close_pairs(a, b, atol):
    np.testing.assert_allclose(a.x_mat, b.x_mat, atol=atol)
    np.testing.assert_allclose(a.y_mat, b.y_mat, atol=atol)


class TestClosedForm:
    def test_positive_diffusion(self):
        assert np_closed_form(0.0, 1.0, 0.0) == 0.0

    def test_vanishing_diffusion(self):
        assert np_closed_form(1.0, 0.0, 0.0) == 0.5

    def test_negative_diffusion(self):
        assert np_closed_form(0.0, -1.0, 0.0) == 1.0

    def test_all_zero(self):
        assert np_closed_form(0.0, 0.0, 0.0) == 0.0

    def test_bounds(self):
        for args in [(0.3, -0.2, 1.0), (1e-9, 5.0, -2.0), (-4.0, 1.0, 0.0)]:
            assert 0.0 <= np_closed_form(*args) <= 1.0


class TestIntermediateMap:
    def test_from_zero_is_whole_channel(self, grid):
        im = intermediate_map(grid, 0.0, 0.25)
        close_pairs(im.pair, channel_pair(grid, 0.25), atol=1e-15)

    @pytest.mark.parametrize("t1, t2", [(0.3, 0.9), (1.0, 2.6), (0.05, 0.0501)])
    def test_composition(self, grid, t1, t2):
        im = intermediate_map(grid, t1, t2 - t1)
        close_pairs(compose(channel_pair(grid, t1), im.pair), channel_pair(grid, t2), atol=1e-8)

    def test_reversed_product_breaks_composition(self, grid):
        start, end = channel_pair(grid, 1.0), channel_pair(grid, 2.0)
        wrong_x = np.linalg.solve(end.x_mat, start.x_mat)
        wrong = ChannelPair(wrong_x, end.y_mat - wrong_x @ start.y_mat @ wrong_x.T, 2.0)
        assert np.max(np.abs(compose(start, wrong).x_mat - end.x_mat)) > 1e-2

    def test_continuity(self, grid):
        im = intermediate_map(grid, 0.5, 1e-4)
        np.testing.assert_allclose(im.pair.x_mat, np.eye(2), atol=5e-3)
        assert np.max(np.abs(im.pair.y_mat)) < 1e-3

    def test_validation(self, grid):
        with pytest.raises(ValidationError):
            intermediate_map(grid, -0.1, 1e-3)
        with pytest.raises(ValidationError):
            intermediate_map(grid, 0.1, 0.0)
        with pytest.raises(GridRangeError):
            intermediate_map(grid, 2.99, 0.1)


class TestCpMatrix:
    def test_identity_map(self):
        m = cp_matrix(IntermediateMap(ChannelPair.identity(), 0.0, 1e-3))
        np.testing.assert_array_equal(m, np.zeros((2, 2)))

    def test_scaled_rotation(self):
        c = 0.8
        y = np.array([[0.3, 0.1], [0.1, 0.2]])
        pair = ChannelPair(c * rotation(0.37, 0.1), y, 1.0)
        m = cp_matrix(IntermediateMap(pair, 0.0, 1.0))
        np.testing.assert_allclose(m, y + 0.5j * (c * c - 1) * OMEGA, atol=1e-15)

    @pytest.mark.parametrize("t, eps", [(0.2, 1e-3), (1.4, 1e-4), (2.5, 5e-2)])
    def test_hermitian(self, grid, t, eps):
        m = cp_matrix(intermediate_map(grid, t, eps))
        np.testing.assert_allclose(m, m.conj().T, atol=1e-15)
        lo, hi = eig_hermitian_2x2(m)
        assert lo <= hi


class TestSpectralMeasure:
    def test_symmetric_spectrum(self):
        assert np_from_eigenvalues((-0.3, 0.3)) == 0.5

    def test_null_spectrum(self):
        assert np_from_eigenvalues((0.0, 0.0)) == 0.0

    def test_positive_spectrum(self):
        assert np_from_eigenvalues((0.1, 2.0)) == 0.0

    def test_identity_at_start(self, grid):
        assert np_spectral(grid, 0.0) == 0.0

    @pytest.mark.parametrize("t", [0.5, 1.3, 2.2])
    def test_matches_closed_form(self, grid, t):
        assert np_spectral(grid, t) == pytest.approx(np_closed_form(*grid.coefficients_at(t)), abs=1e-3)

    def test_extrapolation_helps(self, grid):
        t = 0.5
        target = np_closed_form(*grid.coefficients_at(t))
        raw = np_spectral(grid, t, 1e-2, richardson=False)
        extrapolated = np_spectral(grid, t, 1e-2)
        assert abs(extrapolated - target) < abs(raw - target)

    def test_bounded(self, grid):
        for t in np.linspace(0.01, 2.9, 30):
            assert 0.0 <= np_spectral(grid, t) <= 1.0

    def test_markovian_regime_mostly_cp(self, grid_for):
        # for x >> 1 the diffusion coefficient stays positive once the bath has settled
        g = grid_for(x=10.0)
        late = [np_closed_form(*g.coefficients_at(t)) for t in np.linspace(1.0, 3.0, 21)]
        assert max(late) < 0.5
        assert all(not math.isnan(v) for v in late)
