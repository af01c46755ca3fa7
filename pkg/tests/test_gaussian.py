import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbm_teleport.errors import NumericError, ValidationError
from qbm_teleport.gaussian import (TwoModeBlocks, gaussian_fidelity_coherent, is_physical,
                                   log_negativity, pt_symplectic_eig_min, pt_symplectic_spectrum,
                                   tmsv_covariance, two_mode_det, vacuum)

radii = st.floats(0.0, 3.0)
phases = st.floats(0.0, 2 * math.pi)


class TestTmsv:
    @pytest.mark.parametrize("phi", [0.0, 1.3, math.pi])
    def test_zero_squeezing_is_vacuum(self, phi):
        np.testing.assert_array_equal(tmsv_covariance(0.0, phi), 0.5 * np.eye(4))

    def test_blocks_at_pi(self):
        b = TwoModeBlocks.from_matrix(tmsv_covariance(2.0, math.pi))
        np.testing.assert_allclose(np.diag(b.a_block), [13.654116418, 13.654116418], rtol=1e-9)
        half_sinh = 0.5 * math.sinh(4.0)
        np.testing.assert_allclose(b.c_block, np.diag([-half_sinh, half_sinh]), atol=1e-12)

    def test_negative_squeezing(self):
        with pytest.raises(ValidationError):
            tmsv_covariance(-0.1, 0.0)

    def test_blocks_round_trip(self):
        sigma = tmsv_covariance(0.8, 2.1)
        np.testing.assert_array_equal(TwoModeBlocks.from_matrix(sigma).to_matrix(), sigma)

    @settings(max_examples=60, deadline=None)
    @given(radii, phases)
    def test_pure_state_determinant(self, r, phi):
        assert two_mode_det(tmsv_covariance(r, phi)) == pytest.approx(1 / 16, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(radii, phases)
    def test_pt_eigenvalue_phase_independent(self, r, phi):
        # near r=0 the two eigenvalues merge and the root loses ~sqrt(eps)
        assert 2 * pt_symplectic_eig_min(tmsv_covariance(r, phi)) == pytest.approx(
            math.exp(-2 * r), rel=1e-9, abs=1e-7)
        assert pt_symplectic_eig_min(tmsv_covariance(r, phi)) == pytest.approx(
            pt_symplectic_eig_min(tmsv_covariance(r, 0.0)), abs=1e-12)


class TestPartialTranspose:
    def test_vacuum(self):
        assert pt_symplectic_eig_min(vacuum(2)) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("r, two_nu", [(2.0, 0.018315638888734179), (1.0, 0.1353352832366127)])
    def test_tmsv_closed_form(self, r, two_nu):
        sigma = tmsv_covariance(r, math.pi)
        assert 2 * pt_symplectic_eig_min(sigma) == pytest.approx(two_nu, rel=1e-10)
        assert 2 * pt_symplectic_spectrum(sigma)[0] == pytest.approx(two_nu, rel=1e-8)

    def test_brute_force_spectrum_of_thermal_state(self):
        sigma = np.diag([1.5, 1.5, 0.7, 0.7])
        np.testing.assert_allclose(pt_symplectic_spectrum(sigma), [0.7, 1.5], rtol=1e-12)

    def test_unphysical_rejected(self):
        sigma = 0.5 * np.diag([1.0, -1.0, 1.0, -1.0])
        with pytest.raises(NumericError):
            pt_symplectic_eig_min(sigma)

    def test_wrong_shape(self):
        with pytest.raises(ValidationError):
            pt_symplectic_eig_min(np.eye(2))


class TestLogNegativity:
    def test_boundary(self):
        assert log_negativity(0.5) == 0.0

    def test_squeezed(self):
        assert log_negativity(math.exp(-4) / 2) == pytest.approx(4.0, abs=1e-14)

    def test_clamped(self):
        assert log_negativity(1.0) == 0.0

    @pytest.mark.parametrize("bad", [0.0, -0.2])
    def test_domain(self, bad):
        with pytest.raises(ValidationError):
            log_negativity(bad)


class TestFidelity:
    def test_identical_pure_states(self):
        assert gaussian_fidelity_coherent(0.5 * np.eye(2)) == pytest.approx(1.0, abs=1e-15)

    def test_classical_limit(self):
        assert gaussian_fidelity_coherent(1.5 * np.eye(2)) == pytest.approx(0.5, abs=1e-15)

    def test_asymmetric(self):
        assert gaussian_fidelity_coherent(np.diag([0.5, 1.5])) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_unphysical(self):
        with pytest.raises(ValidationError):
            gaussian_fidelity_coherent(0.1 * np.eye(2))

    def test_asymmetric_matrix(self):
        with pytest.raises(ValidationError):
            gaussian_fidelity_coherent([[1.0, 0.2], [0.0, 1.0]])

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.5, 5.0), st.floats(0.0, 3.0))
    def test_decreases_with_added_noise(self, n, extra):
        assert gaussian_fidelity_coherent((n + extra) * np.eye(2)) <= gaussian_fidelity_coherent(n * np.eye(2))


class TestPhysicality:
    def test_vacuum(self):
        assert is_physical(vacuum(1))

    def test_subvacuum(self):
        assert not is_physical(np.diag([0.1, 0.1]))

    def test_tmsv(self):
        assert is_physical(tmsv_covariance(2.0, math.pi))
