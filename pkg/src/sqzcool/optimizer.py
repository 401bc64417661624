"""Optimal squeezing phase and bandwidth, and the occupancy-minimizing detuning."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .cooling import closed_form_cooling_rate, standard_backaction, zeta
from .errors import DomainError, Infeasible, NoMinimumInWindow
from .params import FEASIBILITY_MARGIN, ValidatedModel, canonical_phase
from .spectra import _reservoir_spectra, _sideband_spectrum

# rhs of the matching condition below this counts as zero (no finite bandwidth)
MATCH_EPS = 1e-14
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
SCAN_POINTS = 64


def optimal_phase(delta_a: float, kappa_a: float, omega_m: float = 1.0) -> float:
    """Squeezing phase in [0, pi) that minimizes the Stokes-sideband force noise."""
    if not delta_a > 0:
        raise DomainError(f"optimal phase is defined for delta_a > 0, got {delta_a}")
    angle = math.atan2(2.0 * delta_a * kappa_a, delta_a**2 - omega_m**2 - kappa_a**2)
    return canonical_phase(0.5 * angle)


def numerical_optimal_phase(model: ValidatedModel, step: float = 1e-3) -> float:
    """Minimize s_a(-omega_m) over the phase without using the closed form.

    A 64-point scan brackets the minimum; the bracket is then refined by a
    root search on the symmetric difference ``f(phi+step) - f(phi-step)``,
    which vanishes exactly at the minimum of a function even about it.
    """
    w = model.omega_m
    n, m = _reservoir_spectra(-w, model.chi, model.kappa_c, model.xi)
    if m == 0:
        raise DomainError("force spectrum does not depend on the phase without squeezing")

    def f(phi):
        return _sideband_spectrum(-w, model.kappa_a, model.delta_a, phi, n, m)

    grid = np.linspace(0.0, math.pi, SCAN_POINTS, endpoint=False)
    i = int(np.argmin(f(grid)))
    h = math.pi / SCAN_POINTS

    def slope(phi):
        return float(f(phi + step) - f(phi - step))

    root = brentq(slope, grid[i] - h, grid[i] + h, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return canonical_phase(root)


class MatchedBandwidth(NamedTuple):
    feasible: bool
    r_plus: float | None
    s0_threshold: float


def feasibility_threshold(xi, delta_a, kappa_a, omega_m=1.0):
    """Largest S(0) for which finite-bandwidth matching exists."""
    z = zeta(delta_a, kappa_a, omega_m)
    return 1.0 - 2.0 * xi * z / (1.0 + z)


def _check_observables(s0, xi, delta_a):
    if not (0.0 < s0 <= 1.0):
        raise DomainError(f"s0 must lie in (0, 1], got {s0}")
    if not (0.0 < xi <= 1.0):
        raise DomainError(f"xi must lie in (0, 1], got {xi}")
    if not delta_a > 0:
        raise DomainError(f"delta_a must be > 0, got {delta_a}")
    if (1.0 - s0) / xi >= 1.0 - FEASIBILITY_MARGIN:
        raise Infeasible(f"S(0)={s0} is unreachable below threshold at xi={xi}")


def matched_bandwidth(s0: float, xi: float, delta_a: float, kappa_a: float,
                      omega_m: float = 1.0) -> MatchedBandwidth:
    """Squeezing bandwidth at which the Stokes rate is fully cancelled.

    Solves ``omega_m^2 / r_+^2 = (1 - s0)(1 + zeta)/(2 xi zeta) - 1``; when the
    right side is not positive the match needs infinite bandwidth and
    ``feasible`` is False.
    """
    _check_observables(s0, xi, delta_a)
    z = float(zeta(delta_a, kappa_a, omega_m))
    rhs = (1.0 - s0) * (1.0 + z) / (2.0 * xi * z) - 1.0
    threshold = float(feasibility_threshold(xi, delta_a, kappa_a, omega_m))
    if rhs > MATCH_EPS:
        return MatchedBandwidth(True, omega_m / math.sqrt(rhs), threshold)
    return MatchedBandwidth(False, None, threshold)


def _infinite_bandwidth_bracket(s0, xi, z):
    return 1.0 + (1.0 - s0) / (s0 - 1.0 + xi) * (
        0.25 * (1.0 - s0) * (1.0 + 1.0 / z) ** 2 - xi / z
    )


def infinite_bandwidth_backaction(s0: float, xi: float, delta_a: float, kappa_a: float,
                                  omega_m: float = 1.0) -> float:
    """Back-action limit at optimal phase when the bandwidth goes to infinity."""
    if not delta_a > 0:
        raise DomainError(f"delta_a must be > 0, got {delta_a}")
    if not s0 - 1.0 + xi > 0:
        raise DomainError(f"needs s0 - 1 + xi > 0, got s0={s0}, xi={xi}")
    z = float(zeta(delta_a, kappa_a, omega_m))
    return float(standard_backaction(delta_a, kappa_a, omega_m)) * _infinite_bandwidth_bracket(s0, xi, z)


@dataclass(frozen=True)
class OptimalSqueezing:
    phi_opt: float
    feasible: bool
    r_plus_matched: float | None
    n_a_predicted: float
    s0_threshold: float


def optimal_squeezing(s0: float, xi: float, delta_a: float, kappa_a: float,
                      omega_m: float = 1.0) -> OptimalSqueezing:
    """Best phase and bandwidth for given squeezing strength and purity.

    ``xi == 0`` is the vacuum-driven baseline; ``s0`` is then ignored.
    """
    phi = optimal_phase(delta_a, kappa_a, omega_m)
    n0 = float(standard_backaction(delta_a, kappa_a, omega_m))
    if xi == 0.0:
        return OptimalSqueezing(phi, False, None, n0, 1.0)
    match = matched_bandwidth(s0, xi, delta_a, kappa_a, omega_m)
    if match.feasible:
        n_a = n0 * (1.0 - xi)
    else:
        n_a = infinite_bandwidth_backaction(s0, xi, delta_a, kappa_a, omega_m)
    return OptimalSqueezing(phi, match.feasible, match.r_plus, n_a, match.s0_threshold)


def optimal_backaction_grid(s0, xi, delta_a, kappa_a, omega_m=1.0):
    """Vectorized ``(n_a, feasible)`` of :func:`optimal_squeezing` over detuning/linewidth arrays."""
    delta_a = np.asarray(delta_a, dtype=float)
    kappa_a = np.asarray(kappa_a, dtype=float)
    n0 = standard_backaction(delta_a, kappa_a, omega_m)
    if xi == 0.0:
        return n0 * np.ones(np.broadcast(delta_a, kappa_a).shape), np.zeros(
            np.broadcast(delta_a, kappa_a).shape, dtype=bool)
    _check_observables(s0, xi, 1.0)
    z = zeta(delta_a, kappa_a, omega_m)
    rhs = (1.0 - s0) * (1.0 + z) / (2.0 * xi * z) - 1.0
    feasible = rhs > MATCH_EPS
    n_a = np.where(feasible, n0 * (1.0 - xi), n0 * _infinite_bandwidth_bracket(s0, xi, z))
    return n_a, feasible


def occupancy_at_optimum(delta_a, kappa_a, s0, xi, gamma, n_th, g, omega_m=1.0):
    """Steady occupancy with phase and bandwidth set to their optima (vectorized in delta_a)."""
    n_a, _ = optimal_backaction_grid(s0, xi, delta_a, kappa_a, omega_m)
    gamma_cool = closed_form_cooling_rate(delta_a, kappa_a, g, omega_m)
    return (gamma * n_th + gamma_cool * n_a) / (gamma + gamma_cool)


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-6,
                   max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


class DetuningOptimum(NamedTuple):
    delta_opt: float
    n_st_min: float


def optimize_detuning(kappa_a: float, s0: float, xi: float, gamma: float, n_th: float,
                      g: float, window: tuple[float, float] = (0.05, 5.0),
                      omega_m: float = 1.0, tol: float = 1e-6) -> DetuningOptimum:
    """Detuning minimizing steady occupancy at fixed linewidth and squeezing.

    Phase and bandwidth follow their optima at each trial detuning, with the
    infinite-bandwidth limit where matching is impossible.  The objective
    has a kink at the feasibility boundary, so a 64-point scan brackets the
    minimum before golden-section refinement.
    """
    lo, hi = window
    if not (0 < lo < hi):
        raise DomainError(f"search window must satisfy 0 < lo < hi, got {window}")

    def objective(delta):
        return occupancy_at_optimum(delta, kappa_a, s0, xi, gamma, n_th, g, omega_m)

    grid = np.linspace(lo, hi, SCAN_POINTS)
    values = objective(grid)
    i = int(np.argmin(values))
    if i == 0 or i == SCAN_POINTS - 1:
        raise NoMinimumInWindow(
            f"occupancy is monotone over delta_a in [{lo}, {hi}] at kappa_a={kappa_a}"
        )
    x, fx = golden_section(lambda d: float(objective(d)), grid[i - 1], grid[i + 1], tol)
    if values[i] < fx:
        x, fx = float(grid[i]), float(values[i])
    return DetuningOptimum(float(x), float(fx))
