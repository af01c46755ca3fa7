"""Covariance matrices of the coherent input and the two-mode squeezed
resource, Gaussian fidelity and partial-transpose entanglement.

Convention: quadratures ordered (x1, p1, x2, p2); the vacuum covariance is
identity / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError

OMEGA = np.array([[0.0, 1.0], [-1.0, 0.0]])
PHYSICAL_TOL = 1e-8
SYMMETRY_TOL = 1e-12


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), OMEGA)


def vacuum(n_modes: int = 1) -> np.ndarray:
    return 0.5 * np.eye(2 * n_modes)


def check_covariance(sigma, dims=(2, 4)) -> np.ndarray:
    """Return ``sigma`` as a float array after shape and symmetry checks."""
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] not in dims:
        raise ValidationError(f"expected a square covariance of size {dims}, got {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise ValidationError("covariance has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(sigma))))
    if np.max(np.abs(sigma - sigma.T)) > SYMMETRY_TOL * scale:
        raise ValidationError("covariance is not symmetric")
    return sigma


def is_physical(sigma, tol: float = PHYSICAL_TOL) -> bool:
    """Uncertainty principle: sigma + (i/2) Omega must be positive semidefinite."""
    sigma = np.asarray(sigma, dtype=float)
    omega = symplectic_form(sigma.shape[0] // 2)
    return bool(np.linalg.eigvalsh(sigma + 0.5j * omega)[0] >= -tol)


@dataclass(frozen=True)
class TwoModeBlocks:
    """Blocks of a two-mode covariance [[A, C], [C^T, D]]."""

    a_block: np.ndarray
    d_block: np.ndarray
    c_block: np.ndarray

    @classmethod
    def from_matrix(cls, sigma) -> "TwoModeBlocks":
        sigma = np.asarray(sigma, dtype=float)
        return cls(sigma[:2, :2].copy(), sigma[2:, 2:].copy(), sigma[:2, 2:].copy())

    def to_matrix(self) -> np.ndarray:
        return np.block([[self.a_block, self.c_block], [self.c_block.T, self.d_block]])


def _det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def two_mode_det(sigma) -> float:
    """det(sigma) via the Schur complement of the A block.

    Much better conditioned than LU for strongly squeezed states, where the
    determinant is O(1) while the entries grow like cosh(2r).
    """
    b = TwoModeBlocks.from_matrix(sigma)
    schur = b.d_block - b.c_block.T @ np.linalg.solve(b.a_block, b.c_block)
    return _det2(b.a_block) * _det2(schur)


def squeezing_correlations(r: float, phi: float) -> np.ndarray:
    """sinh(2r) [[cos phi, sin phi], [sin phi, -cos phi]]."""
    c, s = math.cos(phi), math.sin(phi)
    return math.sinh(2 * r) * np.array([[c, s], [s, -c]])


def tmsv_covariance(r: float, phi: float) -> np.ndarray:
    """Two-mode squeezed vacuum with amplitude ``r`` and phase ``phi``."""
    if r < 0:
        raise ValidationError(f"squeezing amplitude must be >= 0, got {r}")
    a = math.cosh(2 * r) * np.eye(2)
    c = squeezing_correlations(r, phi)
    return 0.5 * np.block([[a, c], [c, a]])


def gaussian_fidelity_coherent(sigma_out) -> float:
    """Fidelity between a coherent input and a Gaussian output with matched
    first moments: 1 / sqrt(det(sigma_in + sigma_out))."""
    sigma_out = check_covariance(sigma_out, dims=(2,))
    if not is_physical(sigma_out):
        raise ValidationError("output covariance violates the uncertainty principle")
    return 1.0 / math.sqrt(_det2(vacuum(1) + sigma_out))


def pt_symplectic_eig_min(sigma) -> float:
    """Smallest symplectic eigenvalue of the partially transposed state.

    nu^2 = (D - sqrt(D^2 - 4 det sigma)) / 2 with D = det A + det B - 2 det C,
    evaluated as 2 det sigma / (D + sqrt(...)) to avoid cancellation. The
    separability threshold in this convention is nu = 1/2.
    """
    sigma = check_covariance(sigma, dims=(4,))
    b = TwoModeBlocks.from_matrix(sigma)
    seralian = _det2(b.a_block) + _det2(b.d_block) - 2.0 * _det2(b.c_block)
    det_sigma = two_mode_det(sigma)
    radicand = seralian * seralian - 4.0 * det_sigma
    if radicand < -1e-10 or seralian < 0:
        raise NumericError(f"unphysical covariance: symplectic radicand {radicand:.3e}")
    larger = seralian + math.sqrt(max(radicand, 0.0))
    if larger <= 0:
        raise NumericError("degenerate covariance: vanishing symplectic spectrum")
    nu_sq = 2.0 * det_sigma / larger
    if nu_sq < -1e-10:
        raise NumericError(f"unphysical covariance: nu^2 = {nu_sq:.3e}")
    return math.sqrt(max(nu_sq, 0.0))


def pt_symplectic_spectrum(sigma) -> np.ndarray:
    """Partial-transpose symplectic eigenvalues by direct diagonalisation.

    Uses the Hermitian form S (i Omega) S with S = sqrt(sigma~), whose
    eigenvalues are +/- nu. Independent of :func:`pt_symplectic_eig_min`.
    """
    sigma = check_covariance(sigma, dims=(4,))
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    pt = flip @ sigma @ flip
    w, v = np.linalg.eigh(pt)
    if w[0] <= 0:
        raise NumericError("partial transpose is not positive definite")
    root = (v * np.sqrt(w)) @ v.T
    ev = np.linalg.eigvalsh(root @ (1j * symplectic_form(2)) @ root)
    return np.sort(np.abs(ev))[::2]


def log_negativity(nu_min: float) -> float:
    """max(0, -ln(2 nu)), so that separable states give 0 and a fresh
    squeezed vacuum gives 2r."""
    if not nu_min > 0:
        raise ValidationError(f"symplectic eigenvalue must be positive, got {nu_min}")
    return max(0.0, -math.log(2.0 * nu_min))
