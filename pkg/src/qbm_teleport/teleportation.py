"""Braunstein-Kimble teleportation of coherent states with Bob's resource
mode sent through the QBM channel."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import CoefficientGrid, apply_channel_mode2, channel_pair
from .errors import NumericError, ValidationError
from .gaussian import (gaussian_fidelity_coherent, log_negativity,
                       pt_symplectic_eig_min, tmsv_covariance)

TWO_PI = 2.0 * math.pi
SCAN_POINTS = 513
PHASE_TOL = 1e-6
CLASSICAL_THRESHOLD = 0.5


@dataclass(frozen=True)
class ProtocolParams:
    """Squeezing (r, phi), Bell-measurement transmissivity T and classical gain.

    ``gain=None`` selects g = 1/T, the setting under which the closed-form
    fidelity holds.
    """

    r: float = 2.0
    phi: float = math.pi
    transmissivity: float = 1.0
    gain: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValidationError(f"r must be >= 0, got {self.r}")
        if not math.isfinite(self.phi):
            raise ValidationError(f"phi must be finite, got {self.phi}")
        if not 0 < self.transmissivity <= 1:
            raise ValidationError(f"transmissivity must lie in (0, 1], got {self.transmissivity}")
        if self.gain is not None and not (math.isfinite(self.gain) and self.gain > 0):
            raise ValidationError(f"gain must be positive, got {self.gain}")

    @property
    def reflectivity(self) -> float:
        return math.sqrt(1.0 - self.transmissivity ** 2)

    @property
    def g(self) -> float:
        return 1.0 / self.transmissivity if self.gain is None else self.gain

    @property
    def default_gain(self) -> bool:
        return self.gain is None or math.isclose(self.gain * self.transmissivity, 1.0,
                                                 rel_tol=1e-15, abs_tol=0.0)


def output_covariance(pp: ProtocolParams, grid: CoefficientGrid, dtau: float) -> np.ndarray:
    """Covariance of the teleported state after transit time ``dtau``."""
    big_gamma = grid.big_gamma_at(dtau)
    wbar = grid.wbar_at(dtau)
    g, t, refl = pp.g, pp.transmissivity, pp.reflectivity
    ch, sh = math.cosh(2 * pp.r), math.sinh(2 * pp.r)
    bracket = (math.exp(big_gamma) * g * g * (t * t * ch + 2 * refl * refl + t * t)
               + 2 * math.exp(big_gamma / 2) * g * t * sh * math.cos(pp.phi - dtau / grid.params.x)
               + ch)
    return 0.5 * math.exp(-big_gamma) * bracket * np.eye(2) + 2.0 * wbar


def fidelity_det(pp: ProtocolParams, grid: CoefficientGrid, dtau: float) -> float:
    """1 / sqrt(det(sigma_in + sigma_out)) for arbitrary gain."""
    return gaussian_fidelity_coherent(output_covariance(pp, grid, dtau))


def fidelity_closed_form(r: float, phi, dtau: float, grid: CoefficientGrid,
                         transmissivity: float = 1.0):
    """Fidelity in the Lambda_11 Lambda_22 form, which assumes g = 1/T.

    ``phi`` may be an array; the result then has the same shape.
    """
    big_gamma = grid.big_gamma_at(dtau)
    wbar = grid.wbar_at(dtau)
    ratio = (1.0 - transmissivity ** 2) / transmissivity ** 2
    ch, sh = math.cosh(2 * r), math.sinh(2 * r)
    eg = math.exp(big_gamma)
    phase = 2 * math.exp(big_gamma / 2) * np.cos(np.asarray(phi) - dtau / grid.params.x) * sh
    lam11 = ch + eg * (2 + 4 * wbar[0, 0] + 2 * ratio + ch) + phase
    lam22 = ch + eg * (2 + 4 * wbar[1, 1] + 2 * ratio + ch) + phase
    radicand = -4 * wbar[0, 1] ** 2 + 0.25 * math.exp(-2 * big_gamma) * lam11 * lam22
    if np.any(radicand <= 0):
        raise NumericError("non-positive fidelity radicand: unphysical regime")
    out = 1.0 / np.sqrt(radicand)
    return float(out) if out.ndim == 0 else out


def optimal_phase(dtau: float, x: float) -> float:
    """pi + dtau / x, reduced to [0, 2 pi)."""
    if not x > 0:
        raise ValidationError(f"x must be positive, got {x}")
    return (math.pi + dtau / x) % TWO_PI


def _golden_max(f, lo, hi, tol):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - inv * (hi - lo), lo + inv * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - inv * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + inv * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def optimize_phase_numeric(pp: ProtocolParams, grid: CoefficientGrid,
                           dtau: float) -> tuple[float, float]:
    """Maximise the fidelity over the squeezing phase; ``pp.phi`` is ignored.

    A 513-point scan of [0, 2 pi) brackets the maximum, then golden-section
    search refines it to 1e-6 rad. Returns (phi_star in [0, 2 pi), f_star).
    """
    if pp.default_gain:
        def fid(phi):
            return fidelity_closed_form(pp.r, phi, dtau, grid, pp.transmissivity)
        scan = fid(np.arange(SCAN_POINTS) * (TWO_PI / SCAN_POINTS))
    else:
        def fid(phi):
            return fidelity_det(replace(pp, phi=float(phi)), grid, dtau)
        scan = np.array([fid(k * TWO_PI / SCAN_POINTS) for k in range(SCAN_POINTS)])
    step = TWO_PI / SCAN_POINTS
    k = int(np.argmax(scan))
    phi_star = _golden_max(fid, (k - 1) * step, (k + 1) * step, PHASE_TOL) % TWO_PI
    return phi_star, float(fid(phi_star))


def evolved_resource(r: float, phi: float, grid: CoefficientGrid, dtau: float) -> np.ndarray:
    """Covariance of the squeezed resource after mode 2 crossed the channel."""
    return apply_channel_mode2(tmsv_covariance(r, phi), channel_pair(grid, dtau))


def resource_entanglement(r: float, phi: float, grid: CoefficientGrid, dtau: float) -> float:
    """Logarithmic negativity of the evolved resource."""
    return log_negativity(pt_symplectic_eig_min(evolved_resource(r, phi, grid, dtau)))
