"""Exit-criteria suite with independent oracles; backs ``qbm-teleport check``
and ``tests/test_acceptance.py``.

Each check returns a :class:`CheckResult`; tolerances are fixed constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import mpmath
import numpy as np

from .channel import (QbmParams, build_coefficient_grid, channel_pair, delta_coeff,
                      gamma_coeff, pi_coeff)
from .gaussian import (log_negativity, pt_symplectic_eig_min, pt_symplectic_spectrum,
                       tmsv_covariance)
from .non_markovianity import compose, intermediate_map, np_closed_form, np_spectral
from .sweep import SweepConfig, build_grid, run_sweep
from .teleportation import (ProtocolParams, fidelity_closed_form, fidelity_det,
                            evolved_resource, optimal_phase, optimize_phase_numeric)


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.title}: {self.detail}"


@lru_cache(maxsize=32)
def _grid(x=0.1, s=1.0, theta=100.0, alpha=0.1, n=2001, tau_max=3.0):
    return build_coefficient_grid(QbmParams(x, s, theta, alpha), tau_max, n)


def _angle_gap(a, b):
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


# analytic inner frequency integrals (truncation at w=50 is below 1e-20)
def damping_kernel_exact(u, s=1.0):
    return mpmath.gamma(s + 1) * mpmath.sin((s + 1) * mpmath.atan(u)) / (1 + u * u) ** ((s + 1) / 2)


def noise_kernel_exact(u, s=1.0):
    return mpmath.gamma(s) * mpmath.cos(s * mpmath.atan(u)) / (1 + u * u) ** (s / 2)


def coefficients_oracle(tau, params: QbmParams):
    """(gamma, Delta, Pi) by mpmath quadrature over the analytic kernels."""
    x, s = mpmath.mpf(params.x), params.s
    a2 = mpmath.mpf(params.alpha) ** 2
    noise = 2 * mpmath.mpf(params.theta) * a2
    # split at multiples of the system period so the oscillatory factor is resolved
    pts = [mpmath.mpf(0)]
    period = 2 * mpmath.pi * x
    while pts[-1] + period < tau:
        pts.append(pts[-1] + period)
    pts.append(mpmath.mpf(tau))
    g = a2 * mpmath.quad(lambda u: damping_kernel_exact(u, s) * mpmath.sin(u / x), pts)
    d = noise * mpmath.quad(lambda u: noise_kernel_exact(u, s) * mpmath.cos(u / x), pts)
    p = noise * mpmath.quad(lambda u: noise_kernel_exact(u, s) * mpmath.sin(u / x), pts)
    return float(g), float(d), float(p)


def check_ideal_limit() -> CheckResult:
    grid = _grid()
    errs = []
    for r in (0.0, 0.5, 1.0, 2.0):
        f = fidelity_det(ProtocolParams(r, math.pi, 1.0, 1.0), grid, 0.0)
        errs.append(abs(f - 1.0 / (1.0 + math.exp(-2 * r))))
    worst = max(errs)
    return CheckResult(1, "ideal-limit fidelity", worst <= 1e-10, f"max abs err {worst:.2e} (tol 1e-10)")


def check_noisy_baseline() -> CheckResult:
    t = math.sqrt(0.9)
    f = fidelity_det(ProtocolParams(2.0, math.pi, t), _grid(), 0.0)
    expected = 1.0 / (1.0 + math.exp(-4) + 1.0 / 9.0)
    err = abs(f - expected)
    return CheckResult(2, "noisy-Bell baseline", err <= 1e-9,
                       f"F={f:.9f} expected {expected:.9f} err {err:.2e} (tol 1e-9)")


def check_cross_form() -> CheckResult:
    worst, count = 0.0, 0
    for x in (0.1, 1.0, 10.0):
        grid = _grid(x=x)
        for t2 in (0.9, 1.0):
            t = math.sqrt(t2)
            for r in (0.5, 1.0, 2.0):
                for phi in (0.0, math.pi / 2, math.pi):
                    for dtau in (0.0, 0.3, 0.7, 1.5):
                        closed = fidelity_closed_form(r, phi, dtau, grid, t)
                        det = fidelity_det(ProtocolParams(r, phi, t), grid, dtau)
                        worst = max(worst, abs(closed - det) / abs(det))
                        count += 1
    return CheckResult(3, "closed form vs determinant fidelity", worst <= 1e-8,
                       f"{count} points, max rel err {worst:.2e} (tol 1e-8)")


def check_optimal_phase(s: float = 1.0) -> CheckResult:
    worst = 0.0
    for x in (0.05, 0.1, 1.0):
        grid = _grid(x=x, s=s)
        for dtau in (0.1, 0.5, 1.0, 2.0):
            phi_star, _ = optimize_phase_numeric(ProtocolParams(2.0, 0.0, math.sqrt(0.9)), grid, dtau)
            worst = max(worst, _angle_gap(phi_star, optimal_phase(dtau, x)))
    return CheckResult(4, f"numeric vs analytic optimal phase (s={s:g})", worst <= 1e-4,
                       f"max gap {worst:.2e} rad (tol 1e-4)")


def check_entanglement_oracle() -> CheckResult:
    fresh = max(abs(log_negativity(pt_symplectic_eig_min(tmsv_covariance(r, 0.7))) - 2 * r)
                for r in np.linspace(0.0, 3.0, 31))
    rng = np.random.default_rng(20240605)
    grid = _grid()
    evolved = 0.0
    for _ in range(20):
        r, phi, dtau = rng.uniform(0.1, 3.0), rng.uniform(0, 2 * math.pi), rng.uniform(0, 3.0)
        sigma = evolved_resource(r, phi, grid, dtau)
        evolved = max(evolved, abs(pt_symplectic_eig_min(sigma) - pt_symplectic_spectrum(sigma)[0]))
    ok = fresh <= 1e-10 and evolved <= 1e-8
    return CheckResult(5, "entanglement oracle", ok,
                       f"|E_N - 2r| max {fresh:.2e} (tol 1e-10); nu formula vs spectrum max {evolved:.2e} (tol 1e-8)")


def check_np_limit(s: float = 1.0) -> CheckResult:
    worst = 0.0
    for x in (0.05, 0.1, 1.0, 10.0):
        grid = _grid(x=x, s=s)
        for t in (0.2, 0.5, 1.0, 2.0):
            worst = max(worst, abs(np_spectral(grid, t) - np_closed_form(*grid.coefficients_at(t))))
    at_zero = np_spectral(_grid(s=s), 0.0)
    ok = worst <= 1e-3 and at_zero == 0.0
    return CheckResult(6, f"N_p spectral vs closed form (s={s:g})", ok,
                       f"16 points, max gap {worst:.2e} (tol 1e-3); N_p(0)={at_zero}")


def check_composition(s: float = 1.0) -> CheckResult:
    grid = _grid(s=s)
    rng = np.random.default_rng(7)
    sigma0 = tmsv_covariance(1.0, 0.4)[2:, 2:]
    worst = 0.0
    for _ in range(10):
        t1, t2 = np.sort(rng.uniform(0.0, grid.t_max, 2))
        first = channel_pair(grid, t1)
        step = intermediate_map(grid, t1, t2 - t1).pair
        direct = channel_pair(grid, t2)
        both = compose(first, step)
        worst = max(worst,
                    np.max(np.abs(both.x_mat - direct.x_mat)),
                    np.max(np.abs(both.y_mat - direct.y_mat)),
                    np.max(np.abs(step.apply(first.apply(sigma0)) - direct.apply(sigma0))))
    return CheckResult(7, f"intermediate-map composition (s={s:g})", worst <= 1e-8,
                       f"10 pairs, max entry gap {worst:.2e} (tol 1e-8)")


def check_coefficient_oracle() -> CheckResult:
    worst_point, worst_grid = 0.0, 0.0
    for x in (0.1, 1.0):
        params = QbmParams(x=x)
        grid = _grid(x=x)
        for tau in (0.1, 0.5, 1.0, 2.0):
            exact = coefficients_oracle(tau, params)
            pointwise = (gamma_coeff(tau, params), delta_coeff(tau, params), pi_coeff(tau, params))
            on_grid = grid.coefficients_at(tau)
            for e, a, b in zip(exact, pointwise, on_grid):
                worst_point = max(worst_point, abs(a - e) / abs(e))
                worst_grid = max(worst_grid, abs(b - e) / abs(e))
    ok = worst_point <= 1e-6 and worst_grid <= 1e-6
    return CheckResult(8, "Ohmic coefficient oracle", ok,
                       f"nested quadrature rel err {worst_point:.2e}, grid rel err {worst_grid:.2e} (tol 1e-6)")


def figure_shape(f: np.ndarray) -> tuple[bool, str]:
    """Max at index 0, a local minimum later followed by a local maximum,
    and the start above the classical threshold."""
    interior = np.arange(1, len(f) - 1)
    minima = interior[(f[interior] < f[interior - 1]) & (f[interior] <= f[interior + 1])]
    maxima = interior[(f[interior] > f[interior - 1]) & (f[interior] >= f[interior + 1])]
    revival = bool(len(minima) and np.any(maxima > minima[0]))
    non_constant = float(np.ptp(f)) > 1e-6
    ok = non_constant and int(np.argmax(f)) == 0 and revival and f[0] > 0.5
    return ok, (f"F(0)={f[0]:.6f} max at index {int(np.argmax(f))}, "
                f"{len(minima)} minima / {len(maxima)} maxima, first min F={f[minima[0]]:.6f}"
                if len(minima) else "no local minimum")


def check_figure_shape() -> CheckResult:
    table = run_sweep(SweepConfig(), grid=_grid())
    ok, detail = figure_shape(table.column("f_opt"))
    return CheckResult(9, "fidelity revival shape", ok, detail)


def check_grid_convergence() -> CheckResult:
    cfg = SweepConfig()
    coarse = run_sweep(cfg, grid=_grid(n=2001))
    fine = run_sweep(replace(cfg, grid_n=4001), grid=_grid(n=4001))
    gaps = {c: float(np.max(np.abs(coarse.column(c) - fine.column(c)))) for c in ("f_opt", "e_n", "n_p")}
    worst = max(gaps.values())
    return CheckResult(10, "grid convergence 2001 -> 4001", worst < 1e-6,
                       ", ".join(f"{k} {v:.2e}" for k, v in gaps.items()) + " (tol 1e-6)")


def check_determinism() -> CheckResult:
    cfg = SweepConfig(workers=4)
    first = run_sweep(cfg, grid=build_grid(cfg)).to_csv_string()
    second = run_sweep(cfg, grid=build_grid(cfg)).to_csv_string()
    return CheckResult(11, "byte-identical sweep CSV", first == second,
                       f"{len(first)} bytes, identical={first == second}")


def check_spectral_family() -> list[CheckResult]:
    out = []
    for s in (0.5, 3.0):
        table = run_sweep(SweepConfig(s=s), grid=_grid(s=s))
        bounded = bool(np.all(table.column("f_opt") > 0) and np.all(table.column("f_opt") <= 1)
                       and np.all(table.column("e_n") >= 0))
        subs = [check_optimal_phase(s), check_np_limit(s), check_composition(s)]
        ok = bounded and all(c.passed for c in subs)
        detail = f"sweep ok={bounded}; " + "; ".join(c.detail for c in subs)
        out.append(CheckResult(12, f"spectral exponent s={s:g}", ok, detail))
    return out


CHECKS = {
    1: check_ideal_limit,
    2: check_noisy_baseline,
    3: check_cross_form,
    4: check_optimal_phase,
    5: check_entanglement_oracle,
    6: check_np_limit,
    7: check_composition,
    8: check_coefficient_oracle,
    9: check_figure_shape,
    10: check_grid_convergence,
    11: check_determinism,
    12: check_spectral_family,
}


def run_checks(numbers=None) -> list[CheckResult]:
    results = []
    for number in numbers or sorted(CHECKS):
        outcome = CHECKS[number]()
        results.extend(outcome if isinstance(outcome, list) else [outcome])
    return results
