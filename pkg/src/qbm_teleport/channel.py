"""Quantum Brownian motion channel in dimensionless units.

Times are tau = omega_c t, rates are in units of omega_c and
hbar = k_B = 1. The bath spectral density is J(w) = w^s exp(-w) with
w = omega / omega_c, and the high-temperature replacement
2 N(w) + 1 -> 2 theta / w is used throughout.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridRangeError, NumericError, ValidationError
from .gaussian import check_covariance, is_physical
from .numerics import (DEFAULT_TOL, UniformGrid, cumulative_simpson,
                       hermite_lookup, integrate_adaptive)

DEFAULT_CUTOFF = 50.0
DEFAULT_TAU_MAX = 3.0
DEFAULT_GRID_N = 2001


@dataclass(frozen=True)
class QbmParams:
    """Channel configuration.

    x      non-Markovianity parameter omega_c / omega_0
    s      spectral exponent (1 Ohmic, <1 sub-Ohmic, >1 supra-Ohmic)
    theta  temperature ratio k_B T / (hbar omega_c)
    alpha  weak-coupling constant
    """

    x: float = 0.1
    s: float = 1.0
    theta: float = 100.0
    alpha: float = 0.1

    def __post_init__(self):
        for name in ("x", "s", "theta", "alpha"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.alpha > 0.5:
            raise ValidationError(f"alpha={self.alpha} is outside the weak-coupling range (<= 0.5)")
        if self.alpha > 0.2:
            warnings.warn(f"alpha={self.alpha} > 0.2: weak-coupling coefficients may be inaccurate",
                          stacklevel=2)

    @property
    def high_temperature(self) -> bool:
        return self.theta >= 1.0


def spectral_density(omega, s: float):
    """J(w) = w^s exp(-w), in units of omega_c."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValidationError("spectral density is defined for omega >= 0")
    out = omega ** s * np.exp(-omega)
    return float(out) if out.ndim == 0 else out


def damping_kernel(u: float, s: float, cutoff: float = DEFAULT_CUTOFF,
                   tol: float = DEFAULT_TOL) -> float:
    """int_0^cutoff J(w) sin(w u) dw.

    Integrated in v = sqrt(w), which removes the w^s branch point at 0.
    """
    def f(v):
        return 2.0 * v ** (2 * s + 1) * math.exp(-v * v) * math.sin(v * v * u)
    return integrate_adaptive(f, 0.0, math.sqrt(cutoff), tol)


def noise_kernel(u: float, s: float, cutoff: float = DEFAULT_CUTOFF,
                 tol: float = DEFAULT_TOL) -> float:
    """int_0^cutoff J(w) / w cos(w u) dw (shared by normal and anomalous diffusion)."""
    def f(v):
        return 2.0 * v ** (2 * s - 1) * math.exp(-v * v) * math.cos(v * v * u)
    return integrate_adaptive(f, 0.0, math.sqrt(cutoff), tol)


def _check_tau(tau):
    if not tau >= 0:
        raise ValidationError(f"tau must be >= 0, got {tau}")


def gamma_coeff(tau: float, params: QbmParams, cutoff: float = DEFAULT_CUTOFF,
                tol: float = DEFAULT_TOL) -> float:
    """Damping coefficient by nested adaptive quadrature."""
    _check_tau(tau)
    x, s = params.x, params.s
    outer = integrate_adaptive(
        lambda u: damping_kernel(u, s, cutoff, tol) * math.sin(u / x), 0.0, tau, tol)
    return params.alpha ** 2 * outer


def delta_coeff(tau: float, params: QbmParams, cutoff: float = DEFAULT_CUTOFF,
                tol: float = DEFAULT_TOL) -> float:
    """Normal diffusion coefficient by nested adaptive quadrature."""
    _check_tau(tau)
    x, s = params.x, params.s
    outer = integrate_adaptive(
        lambda u: noise_kernel(u, s, cutoff, tol) * math.cos(u / x), 0.0, tau, tol)
    return 2.0 * params.theta * params.alpha ** 2 * outer


def pi_coeff(tau: float, params: QbmParams, cutoff: float = DEFAULT_CUTOFF,
             tol: float = DEFAULT_TOL) -> float:
    """Anomalous diffusion coefficient by nested adaptive quadrature."""
    _check_tau(tau)
    x, s = params.x, params.s
    outer = integrate_adaptive(
        lambda u: noise_kernel(u, s, cutoff, tol) * math.sin(u / x), 0.0, tau, tol)
    return 2.0 * params.theta * params.alpha ** 2 * outer


def rotation(tau, x: float) -> np.ndarray:
    """R = [[cos(tau/x), sin(tau/x)], [-sin(tau/x), cos(tau/x)]]; broadcasts over tau."""
    if not x > 0:
        raise ValidationError(f"x must be positive, got {x}")
    angle = np.asarray(tau, dtype=float) / x
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([np.stack([c, s], -1), np.stack([-s, c], -1)], -2)


@lru_cache(maxsize=16)
def _kernels_on_nodes(s, tau_max, n, cutoff, tol):
    # independent of x, theta, alpha: shared by every grid with the same s
    nodes = np.linspace(0.0, tau_max, n)
    damping = np.array([damping_kernel(u, s, cutoff, tol) for u in nodes])
    noise = np.array([noise_kernel(u, s, cutoff, tol) for u in nodes])
    damping.setflags(write=False)
    noise.setflags(write=False)
    return damping, noise


def _sym(m):
    return 0.5 * (m + np.swapaxes(m, -1, -2))


@dataclass(frozen=True)
class ChannelPair:
    """One-mode Gaussian channel sigma -> X sigma X^T + Y."""

    x_mat: np.ndarray
    y_mat: np.ndarray
    tau: float

    @classmethod
    def identity(cls, tau: float = 0.0) -> "ChannelPair":
        return cls(np.eye(2), np.zeros((2, 2)), tau)

    def apply(self, sigma) -> np.ndarray:
        return _sym(self.x_mat @ np.asarray(sigma) @ self.x_mat.T + self.y_mat)


@dataclass(frozen=True, eq=False)
class CoefficientGrid:
    """Master-equation coefficients and the integrated channel data on a uniform tau grid.

    Besides the node values, the derivative of every integrated quantity is
    stored so that off-node queries use cubic Hermite interpolation. W-bar
    is interpolated in the co-rotating frame (the running integral ``corot``)
    and rotated back exactly, which keeps finite differences over
    increments much smaller than the spacing accurate.
    """

    params: QbmParams
    tau: UniformGrid
    gamma: np.ndarray
    delta: np.ndarray
    pi: np.ndarray
    big_gamma: np.ndarray
    wbar: np.ndarray
    d_gamma: np.ndarray
    d_delta: np.ndarray
    d_pi: np.ndarray
    corot: np.ndarray
    d_corot: np.ndarray

    @property
    def t_max(self) -> float:
        return self.tau.t_max

    @property
    def nodes(self) -> np.ndarray:
        return self.tau.nodes

    def _check(self, tau):
        if not (0.0 <= tau <= self.t_max * (1 + 1e-12)):
            raise GridRangeError(f"tau={tau} outside grid range [0, {self.t_max}]")
        return min(float(tau), self.t_max)

    def _lookup(self, values, slopes, tau):
        return hermite_lookup(values, slopes, self.t_max, tau)

    def coefficients_at(self, tau: float) -> tuple[float, float, float]:
        """(gamma, delta, pi) at ``tau``."""
        tau = self._check(tau)
        return (float(self._lookup(self.gamma, self.d_gamma, tau)),
                float(self._lookup(self.delta, self.d_delta, tau)),
                float(self._lookup(self.pi, self.d_pi, tau)))

    def big_gamma_at(self, tau: float) -> float:
        tau = self._check(tau)
        return float(self._lookup(self.big_gamma, 2.0 * self.gamma, tau))

    def wbar_at(self, tau: float) -> np.ndarray:
        tau = self._check(tau)
        rot = rotation(tau, self.params.x)
        corot = self._lookup(self.corot, self.d_corot, tau)
        w = math.exp(-self.big_gamma_at(tau)) * rot @ corot @ rot.T
        return _sym(w)


def build_coefficient_grid(params: QbmParams, tau_max: float = DEFAULT_TAU_MAX,
                           n: int = DEFAULT_GRID_N, cutoff: float = DEFAULT_CUTOFF,
                           tol: float = DEFAULT_TOL) -> CoefficientGrid:
    """Sample gamma, Delta, Pi, Gamma and W-bar on ``n`` nodes over [0, tau_max].

    The inner frequency integrals are evaluated by adaptive quadrature at
    each node; every time integral is a cumulative Simpson sum, so W-bar
    costs O(n) rather than a fresh quadrature per node.
    """
    if not isinstance(n, (int, np.integer)) or n < 9:
        raise ValidationError(f"coefficient grid needs n >= 9 nodes, got {n!r}")
    if not tau_max > 0:
        raise ValidationError(f"tau_max must be positive, got {tau_max}")
    n = int(n)
    tau_max = float(tau_max)
    h = tau_max / (n - 1)
    nodes = np.linspace(0.0, tau_max, n)
    x, a2 = params.x, params.alpha ** 2
    damping, noise = _kernels_on_nodes(params.s, tau_max, n, float(cutoff), float(tol))

    d_gamma = a2 * damping * np.sin(nodes / x)
    d_delta = 2.0 * params.theta * a2 * noise * np.cos(nodes / x)
    d_pi = 2.0 * params.theta * a2 * noise * np.sin(nodes / x)
    gamma = cumulative_simpson(d_gamma, h)
    delta = cumulative_simpson(d_delta, h)
    pi = cumulative_simpson(d_pi, h)
    big_gamma = cumulative_simpson(2.0 * gamma, h)

    rot = rotation(nodes, x)
    m = np.zeros((n, 2, 2))
    m[:, 0, 0] = delta
    m[:, 0, 1] = m[:, 1, 0] = -0.5 * pi
    rot_t = np.swapaxes(rot, -1, -2)
    d_corot = _sym(np.exp(big_gamma)[:, None, None] * (rot_t @ m @ rot))
    corot = cumulative_simpson(d_corot, h)
    # R^{-1} = R^T, so [R^{-1}]^T (...) R^{-1} = R (...) R^T
    wbar = _sym(np.exp(-big_gamma)[:, None, None] * (rot @ corot @ rot_t))

    arrays = dict(gamma=gamma, delta=delta, pi=pi, big_gamma=big_gamma, wbar=wbar,
                  d_gamma=d_gamma, d_delta=d_delta, d_pi=d_pi, corot=corot, d_corot=d_corot)
    for name, arr in arrays.items():
        if not np.all(np.isfinite(arr)):
            raise NumericError(f"non-finite {name} on the coefficient grid")
        arr.setflags(write=False)
    return CoefficientGrid(params=params, tau=UniformGrid(tau_max, nodes), **arrays)


def channel_pair(grid: CoefficientGrid, tau: float) -> ChannelPair:
    """(X, Y) of the channel after transit time ``tau``.

    X = exp(-Gamma/2) [R^{-1}]^T = exp(-Gamma/2) R and Y = 2 W-bar.
    """
    big_gamma = grid.big_gamma_at(tau)
    x_mat = math.exp(-0.5 * big_gamma) * rotation(tau, grid.params.x)
    return ChannelPair(x_mat, 2.0 * grid.wbar_at(tau), float(tau))


def apply_channel_mode2(sigma, pair: ChannelPair) -> np.ndarray:
    """Send mode 2 of a two-mode state through the channel; mode 1 is untouched."""
    sigma = check_covariance(sigma, dims=(4,))
    if not is_physical(sigma):
        raise ValidationError("input covariance violates the uncertainty principle")
    s = np.eye(4)
    s[2:, 2:] = pair.x_mat.T
    out = s.T @ sigma @ s
    out[2:, 2:] += pair.y_mat
    return _sym(out)
