"""Small numerical engine: adaptive quadrature, cumulative integration on
uniform grids, cubic Hermite lookup and closed-form 2x2 Hermitian spectra."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import QuadratureError, ValidationError

DEFAULT_TOL = 1e-10
MAX_SUBINTERVALS = 500


@dataclass(frozen=True)
class UniformGrid:
    """Samples ``values[k]`` taken at ``k * t_max / (n - 1)``.

    ``values`` may carry trailing axes (e.g. a 2x2 matrix per node); the
    first axis always runs over the nodes.
    """

    t_max: float
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim == 0 or values.shape[0] < 2:
            raise ValidationError("uniform grid needs at least 2 samples")
        if not self.t_max > 0:
            raise ValidationError(f"t_max must be positive, got {self.t_max}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "t_max", float(self.t_max))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def step(self) -> float:
        return self.t_max / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n)

    @classmethod
    def sample(cls, f: Callable[[np.ndarray], np.ndarray], t_max: float, n: int) -> "UniformGrid":
        return cls(t_max, f(np.linspace(0.0, t_max, n)))


def integrate_adaptive(f: Callable[[float], float], a: float, b: float,
                       tol: float = DEFAULT_TOL) -> float:
    """Integrate ``f`` over ``[a, b]`` to absolute error ``tol``.

    Backed by QUADPACK's adaptive Gauss-Kronrod scheme; any convergence
    warning is promoted to :class:`QuadratureError` instead of returning a
    silently degraded value.
    """
    if not tol > 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    if not a <= b:
        raise ValidationError(f"need a <= b, got [{a}, {b}]")
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0,
                                        limit=MAX_SUBINTERVALS)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] at tol={tol}: {exc}") from exc
    if not math.isfinite(value) or err > tol:
        raise QuadratureError(
            f"no convergence on [{a}, {b}]: error estimate {err:.3e} > tol {tol:.3e}")
    return value


def cumulative_simpson(values: np.ndarray, h: float) -> np.ndarray:
    """Partial integrals of uniformly spaced samples along axis 0.

    Even nodes use composite Simpson. Odd nodes use Simpson up to k-3 plus
    the 3/8 rule on the last three panels; node 1 uses the three-point
    panel formula h/12 (5 f0 + 8 f1 - f2).
    """
    f = np.asarray(values, dtype=float)
    n = f.shape[0]
    if n < 3:
        raise ValidationError(f"cumulative integration needs n >= 3, got {n}")
    out = np.zeros_like(f)
    panels = h / 3.0 * (f[0:-2:2] + 4.0 * f[1:-1:2] + f[2::2])
    out[2::2] = np.cumsum(panels, axis=0)
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2])
    if n > 3:
        k = np.arange(3, n, 2)
        out[k] = out[k - 3] + 3.0 * h / 8.0 * (
            f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k])
    return out


def cumulative_integral(samples: UniformGrid) -> UniformGrid:
    """Grid of running integrals G_k ~ int_0^{tau_k} f, with G_0 = 0."""
    return UniformGrid(samples.t_max, cumulative_simpson(samples.values, samples.step))


def hermite_lookup(values: np.ndarray, slopes: np.ndarray, t_max: float,
                   tau: float) -> np.ndarray:
    """Cubic Hermite interpolation of node data at ``tau``.

    ``slopes`` are the exact derivatives at the nodes. Queries that land on
    a node (to 1e-9 of a spacing) return the stored node value unchanged.
    """
    n = values.shape[0]
    h = t_max / (n - 1)
    u = tau / h
    k = int(round(u))
    if abs(u - k) < 1e-9:
        return values[min(max(k, 0), n - 1)]
    k = min(int(math.floor(u)), n - 2)
    s = u - k
    s2, s3 = s * s, s * s * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = s3 - 2 * s2 + s
    h01 = -2 * s3 + 3 * s2
    h11 = s3 - s2
    return (h00 * values[k] + h10 * h * slopes[k]
            + h01 * values[k + 1] + h11 * h * slopes[k + 1])


def eig_hermitian_2x2(H, tol: float = 1e-12) -> tuple[float, float]:
    """Ascending eigenvalues of a 2x2 Hermitian matrix.

    Uses lambda = tr/2 -/+ sqrt(((a - d)/2)^2 + |b|^2), which keeps the pair
    exactly real and ordered.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got shape {H.shape}")
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.max(np.abs(H - H.conj().T)) / 2 > tol * scale:
        raise ValidationError("matrix is not Hermitian within tolerance")
    a, d = H[0, 0].real, H[1, 1].real
    b = 0.5 * (H[0, 1] + np.conj(H[1, 0]))
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), abs(b))
    return mean - radius, mean + radius
