"""Punctual non-Markovianity of the QBM channel from CP violation of the
intermediate maps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelPair, CoefficientGrid, channel_pair
from .errors import GridRangeError, NumericError, ValidationError
from .gaussian import OMEGA
from .numerics import eig_hermitian_2x2

DEFAULT_EPS = 1e-4


def np_closed_form(gamma: float, delta: float, pi: float) -> float:
    """(1/2) [1 - Delta / sqrt(Delta^2 + gamma^2 + Pi^2)]; 0 when all vanish."""
    norm = math.hypot(delta, gamma, pi)
    if norm == 0.0:
        return 0.0
    return min(1.0, max(0.0, 0.5 * (1.0 - delta / norm)))


@dataclass(frozen=True)
class IntermediateMap:
    pair: ChannelPair
    t: float
    eps: float


def compose(first: ChannelPair, second: ChannelPair) -> ChannelPair:
    """Channel obtained by applying ``first`` and then ``second``."""
    x = second.x_mat @ first.x_mat
    y = second.x_mat @ first.y_mat @ second.x_mat.T + second.y_mat
    return ChannelPair(x, 0.5 * (y + y.T), second.tau)


def intermediate_map(grid: CoefficientGrid, t: float, eps: float) -> IntermediateMap:
    """Channel taking the state at ``t`` to the state at ``t + eps``.

    X(t+eps, t) = X(t+eps) X(t)^{-1} and Y(t+eps, t) = Y(t+eps) - X Y(t) X^T,
    the unique pair for which composing with the map up to t reproduces the
    map up to t + eps.
    """
    if not t >= 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    if t + eps > grid.t_max * (1 + 1e-12):
        raise GridRangeError(f"t + eps = {t + eps} beyond grid range {grid.t_max}")
    start = channel_pair(grid, t)
    end = channel_pair(grid, t + eps)
    det = np.linalg.det(start.x_mat)
    if not (math.isfinite(det) and abs(det) > 0):
        raise NumericError(f"channel matrix X({t}) is singular")
    x = np.linalg.solve(start.x_mat.T, end.x_mat.T).T
    y = end.y_mat - x @ start.y_mat @ x.T
    return IntermediateMap(ChannelPair(x, 0.5 * (y + y.T), t + eps), float(t), float(eps))


def cp_matrix(im: IntermediateMap) -> np.ndarray:
    """Y - (i/2) Omega + (i/2) X Omega X^T; negative eigenvalues flag CP violation."""
    x, y = im.pair.x_mat, im.pair.y_mat
    return y - 0.5j * OMEGA + 0.5j * (x @ OMEGA @ x.T)


def np_from_eigenvalues(lams) -> float:
    """(1/2) sum(|l| - l) / sum(|l|): weight of the negative part, 0 for a null spectrum."""
    total = sum(abs(v) for v in lams)
    if total == 0.0:
        return 0.0
    return 0.5 * sum(abs(v) - v for v in lams) / total


def _np_from_map(grid, t, eps):
    return np_from_eigenvalues(eig_hermitian_2x2(cp_matrix(intermediate_map(grid, t, eps))))


def np_spectral(grid: CoefficientGrid, t: float, eps: float = DEFAULT_EPS,
                richardson: bool = True) -> float:
    """Non-Markovianity from the negative part of the CP-matrix spectrum.

    With ``richardson`` the increments eps and eps/2 are combined as
    2 N(eps/2) - N(eps), cancelling the O(eps) bias. The channel is the
    identity at t = 0, where the measure is 0 by definition.
    """
    if t == 0:
        return 0.0
    if not richardson:
        return _np_from_map(grid, t, eps)
    value = 2.0 * _np_from_map(grid, t, 0.5 * eps) - _np_from_map(grid, t, eps)
    return min(1.0, max(0.0, value))
