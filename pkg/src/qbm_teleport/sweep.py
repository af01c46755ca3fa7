"""Parameter sweeps over the channel transit time and their CSV output."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from typing import Callable, TextIO

import numpy as np

from .channel import (DEFAULT_CUTOFF, DEFAULT_GRID_N, CoefficientGrid, QbmParams,
                      build_coefficient_grid)
from .errors import ConfigError
from .non_markovianity import DEFAULT_EPS, np_closed_form, np_spectral
from .numerics import DEFAULT_TOL
from .teleportation import (CLASSICAL_THRESHOLD, ProtocolParams, fidelity_det,
                            optimal_phase, optimize_phase_numeric,
                            resource_entanglement)

SWEEP_COLUMNS = ("tau", "phi_opt", "f_opt", "f_fixed_phase_pi", "e_n", "n_p",
                 "classical_threshold")
EXTRA_SWEEP_COLUMNS = ("f_phase", "n_p_spectral")
COEFF_COLUMNS = ("tau", "gamma", "delta", "pi", "big_gamma", "wbar_11", "wbar_12", "wbar_22")
PHASE_COLUMNS = ("tau", "phi_opt_analytic", "phi_opt_numeric", "phase_error",
                 "f_opt_analytic", "f_opt_numeric")


@dataclass(frozen=True)
class SweepConfig:
    x: float = 0.1
    s: float = 1.0
    theta: float = 100.0
    alpha: float = 0.1
    r: float = 2.0
    phi: float = math.pi
    transmissivity: float = math.sqrt(0.9)
    gain: float | None = None
    tau_max: float = 3.0
    n_points: int = 201
    grid_n: int = DEFAULT_GRID_N
    eps: float = DEFAULT_EPS
    cutoff: float = DEFAULT_CUTOFF
    quad_tol: float = DEFAULT_TOL
    workers: int = 1
    outputs: tuple[str, ...] = SWEEP_COLUMNS
    out_path: str | None = None

    def __post_init__(self):
        for key in ("x", "s", "theta", "alpha", "tau_max", "eps", "cutoff", "quad_tol"):
            value = getattr(self, key)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(key, f"must be a positive number, got {value}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ConfigError("r", f"must be >= 0, got {self.r}")
        if not math.isfinite(self.phi):
            raise ConfigError("phi", f"must be finite, got {self.phi}")
        if not 0 < self.transmissivity <= 1:
            raise ConfigError("transmissivity", f"must lie in (0, 1], got {self.transmissivity}")
        if self.gain is not None and not (math.isfinite(self.gain) and self.gain > 0):
            raise ConfigError("gain", f"must be positive, got {self.gain}")
        if self.alpha > 0.5:
            raise ConfigError("alpha", f"must be <= 0.5 (weak coupling), got {self.alpha}")
        if self.n_points < 2:
            raise ConfigError("n_points", f"must be >= 2, got {self.n_points}")
        if self.grid_n < 9:
            raise ConfigError("grid_n", f"must be >= 9, got {self.grid_n}")
        if self.workers < 1:
            raise ConfigError("workers", f"must be >= 1, got {self.workers}")
        known = SWEEP_COLUMNS + EXTRA_SWEEP_COLUMNS
        unknown = [c for c in self.outputs if c not in known]
        if unknown or not self.outputs:
            raise ConfigError("outputs", f"unknown or empty column selection {unknown or '[]'}")

    @property
    def qbm(self) -> QbmParams:
        return QbmParams(self.x, self.s, self.theta, self.alpha)

    def protocol(self, phi: float | None = None) -> ProtocolParams:
        return ProtocolParams(self.r, self.phi if phi is None else phi,
                              self.transmissivity, self.gain)

    @property
    def taus(self) -> np.ndarray:
        return np.linspace(0.0, self.tau_max, self.n_points)


def _parse_outputs(text):
    return tuple(c.strip() for c in text.split(",") if c.strip())


def _parse_optional_float(text):
    return None if text.strip().lower() in ("", "none", "auto") else float(text)


_CONVERTERS: dict[str, Callable[[str], object]] = {
    "gain": _parse_optional_float,
    "outputs": _parse_outputs,
    "out_path": lambda text: text.strip() or None,
    "n_points": int,
    "grid_n": int,
    "workers": int,
}
_ALIASES = {"out": "out_path"}
CONFIG_KEYS = tuple(f.name for f in fields(SweepConfig)) + ("transmissivity_sq",)


def _convert(key, text, line=None):
    key = _ALIASES.get(key, key)
    if key not in CONFIG_KEYS:
        raise ConfigError(key, "unknown configuration key", line)
    try:
        if key == "transmissivity_sq":
            return "transmissivity", math.sqrt(float(text))
        return key, _CONVERTERS.get(key, float)(text)
    except ValueError as exc:
        raise ConfigError(key, f"cannot parse value {text!r}", line) from exc


def parse_config(text: str = "", overrides: dict[str, str] | None = None) -> SweepConfig:
    """Resolve flat ``key=value`` text plus overrides into a SweepConfig.

    Blank lines and ``#`` comments are ignored; overrides win over the file.
    ``transmissivity_sq`` may be given instead of ``transmissivity``.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError("<syntax>", f"expected key=value, got {raw.strip()!r}", lineno)
        name, parsed = _convert(key.strip(), value.strip(), lineno)
        values[name] = parsed
    for key, value in (overrides or {}).items():
        name, parsed = _convert(key.strip(), str(value).strip())
        values[name] = parsed
    return SweepConfig(**values)


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    rows: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]

    def to_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([f"{v:.11e}" for v in row])

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def build_grid(config: SweepConfig) -> CoefficientGrid:
    return build_coefficient_grid(config.qbm, config.tau_max, config.grid_n,
                                  config.cutoff, config.quad_tol)


def _ordered_map(fn, items, workers):
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_sweep(config: SweepConfig, grid: CoefficientGrid | None = None) -> Table:
    """Figure data: one row per transit time, in increasing tau."""
    grid = grid if grid is not None else build_grid(config)
    x = config.x

    def point(tau):
        phi_opt = optimal_phase(tau, x)
        row = {
            "tau": tau,
            "phi_opt": phi_opt,
            "f_opt": fidelity_det(config.protocol(phi_opt), grid, tau),
            "f_fixed_phase_pi": fidelity_det(config.protocol(math.pi), grid, tau),
            "e_n": resource_entanglement(config.r, phi_opt, grid, tau),
            "n_p": np_closed_form(*grid.coefficients_at(tau)),
            "classical_threshold": CLASSICAL_THRESHOLD,
        }
        if "f_phase" in config.outputs:
            row["f_phase"] = fidelity_det(config.protocol(), grid, tau)
        if "n_p_spectral" in config.outputs:
            tau_np = min(tau, grid.t_max - config.eps)
            row["n_p_spectral"] = np_spectral(grid, tau_np, config.eps)
        return [row[c] for c in config.outputs]

    rows = _ordered_map(point, [float(t) for t in config.taus], config.workers)
    return Table(tuple(config.outputs), np.array(rows, dtype=float))


def run_coefficients(config: SweepConfig, grid: CoefficientGrid | None = None) -> Table:
    grid = grid if grid is not None else build_grid(config)
    rows = []
    for tau in config.taus:
        gamma, delta, pi = grid.coefficients_at(tau)
        w = grid.wbar_at(tau)
        rows.append([tau, gamma, delta, pi, grid.big_gamma_at(tau), w[0, 0], w[0, 1], w[1, 1]])
    return Table(COEFF_COLUMNS, np.array(rows))


def run_phase_optimization(config: SweepConfig, grid: CoefficientGrid | None = None) -> Table:
    grid = grid if grid is not None else build_grid(config)

    def point(tau):
        analytic = optimal_phase(tau, config.x)
        numeric, f_numeric = optimize_phase_numeric(config.protocol(), grid, tau)
        diff = abs((numeric - analytic + math.pi) % (2 * math.pi) - math.pi)
        return [tau, analytic, numeric, diff,
                fidelity_det(config.protocol(analytic), grid, tau), f_numeric]

    rows = _ordered_map(point, [float(t) for t in config.taus], config.workers)
    return Table(PHASE_COLUMNS, np.array(rows))

