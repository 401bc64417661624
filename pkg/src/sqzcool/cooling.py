"""Scattering rates, cooling rate, back-action limit and phonon occupancy."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InternalInconsistency, NotCooling
from .params import ValidatedModel
from .spectra import force_spectrum, m_tilde, n_tilde

# ratio above which the weak-coupling hierarchy gamma << G << (r, kappa, omega_m) is flagged
WEAK_COUPLING_RATIO = 0.3
GAMMA_ROUTE_RTOL = 1e-10


def sideband_lorentzians(delta_a, kappa_a, omega_m=1.0):
    """Cavity response denominators at the anti-Stokes and Stokes sidebands."""
    lor_m = kappa_a * kappa_a + (delta_a - omega_m) ** 2
    lor_p = kappa_a * kappa_a + (delta_a + omega_m) ** 2
    return lor_m, lor_p


def zeta(delta_a, kappa_a, omega_m=1.0):
    """Sideband asymmetry sqrt(L_-/L_+); below one for blue-shifted cavity (delta_a > 0)."""
    lor_m, lor_p = sideband_lorentzians(delta_a, kappa_a, omega_m)
    return np.sqrt(lor_m / lor_p)


def standard_backaction(delta_a, kappa_a, omega_m=1.0):
    """Back-action occupancy of ordinary sideband cooling (vacuum drive)."""
    lor_m, _ = sideband_lorentzians(delta_a, kappa_a, omega_m)
    return lor_m / (4.0 * delta_a * omega_m)


def closed_form_cooling_rate(delta_a, kappa_a, g, omega_m=1.0):
    lor_m, lor_p = sideband_lorentzians(delta_a, kappa_a, omega_m)
    return 2.0 * kappa_a * g * g * (1.0 / lor_m - 1.0 / lor_p)


def scattering_rates(model: ValidatedModel) -> tuple[float, float]:
    """Stokes and anti-Stokes rates ``(A_+, A_-) = G^2 (s_a(-w_m), s_a(+w_m))``."""
    w = model.omega_m
    s = force_spectrum(np.array([-w, w]), model)
    g2 = model.g**2
    return float(g2 * s[0]), float(g2 * s[1])


def cooling_rate(model: ValidatedModel) -> float:
    """Net optical damping from the closed form, cross-checked against A_- - A_+."""
    closed = float(closed_form_cooling_rate(model.delta_a, model.kappa_a, model.g, model.omega_m))
    a_plus, a_minus = scattering_rates(model)
    spectral = a_minus - a_plus
    scale = max(abs(closed), 1e-6 * (a_plus + a_minus))
    if abs(spectral - closed) > GAMMA_ROUTE_RTOL * scale:
        raise InternalInconsistency(
            f"cooling rate routes disagree: closed form {closed!r}, spectral {spectral!r}"
        )
    return closed


def backaction_limit(model: ValidatedModel) -> float:
    """Effective bath occupancy imposed by the light, ``A_+ / Gamma``."""
    gamma_cool = cooling_rate(model)
    if gamma_cool <= 0:
        raise NotCooling(f"cooling rate {gamma_cool:.6g} <= 0; back-action limit undefined")
    a_plus, _ = scattering_rates(model)
    return a_plus / gamma_cool


def backaction_at_optimal_phase(model: ValidatedModel) -> float:
    """Closed form of ``A_+/Gamma`` valid when the phase minimizes s_a(-omega_m)."""
    w = model.omega_m
    z = float(zeta(model.delta_a, model.kappa_a, w))
    n = float(n_tilde(w, model))
    m = float(m_tilde(w, model))
    n0 = float(standard_backaction(model.delta_a, model.kappa_a, w))
    return n0 * (1.0 + n * (1.0 + 1.0 / z**2) - 2.0 * m / z)


def steady_state(model: ValidatedModel) -> float:
    """Steady phonon number, the rate-weighted mix of thermal and optical baths."""
    gamma_cool = cooling_rate(model)
    if gamma_cool < 0:
        raise NotCooling(f"cooling rate {gamma_cool:.6g} < 0 (optical heating)")
    a_plus, _ = scattering_rates(model)
    gamma = model.optomech.gamma
    # Gamma * N_a == A_+, which keeps G -> 0 well defined
    return (gamma * model.optomech.n_th + a_plus) / (gamma + gamma_cool)


class ApproxOccupancy(NamedTuple):
    n_st: float
    cooperativity: float
    detuning_warning: bool


def cooperativity(model: ValidatedModel) -> float:
    return 2.0 * model.g**2 / (model.optomech.gamma * model.kappa_a)


def approx_steady_state(model: ValidatedModel) -> ApproxOccupancy:
    """Large-cooperativity estimate ``N_th/C + N_0 (1 - xi)`` for red-sideband driving."""
    c = cooperativity(model)
    n0 = float(standard_backaction(model.delta_a, model.kappa_a, model.omega_m))
    n_st = model.optomech.n_th / c + n0 * (1.0 - model.xi)
    warn = not math.isclose(model.delta_a, model.omega_m, rel_tol=1e-9)
    return ApproxOccupancy(n_st, c, warn)


def phonon_evolution(t, n_initial, model: ValidatedModel):
    """Relaxation of the mean phonon number toward :func:`steady_state`."""
    total = model.optomech.gamma + cooling_rate(model)
    if total <= 0:
        raise NotCooling(f"gamma + Gamma = {total:.6g} <= 0; no relaxation")
    n_st = steady_state(model)
    return n_st + (n_initial - n_st) * np.exp(-total * np.asarray(t, dtype=float))


def weak_coupling_warning(model: ValidatedModel) -> bool:
    g = model.g
    if g == 0:
        return True
    scales = [model.kappa_a, model.omega_m]
    if model.chi > 0 and model.xi > 0:
        scales += [model.r_plus, model.r_minus]
    ratios = [model.optomech.gamma / g] + [g / s for s in scales]
    return max(ratios) > WEAK_COUPLING_RATIO


@dataclass(frozen=True)
class CoolingReport:
    a_plus: float
    a_minus: float
    gamma_cool: float
    zeta: float
    n0: float
    n_a: float
    n_st: float
    cooperativity: float
    n_st_approx: float
    detuning_warning: bool
    weak_coupling_warning: bool

    @property
    def approx_discrepancy(self) -> float:
        """Exact minus approximate occupancy."""
        return self.n_st - self.n_st_approx

    def summary(self) -> str:
        lines = [
            f"A_+ (Stokes)        = {self.a_plus:.6g}",
            f"A_- (anti-Stokes)   = {self.a_minus:.6g}",
            f"Gamma               = {self.gamma_cool:.6g}",
            f"zeta                = {self.zeta:.6g}",
            f"N_0                 = {self.n0:.6g}",
            f"N_a                 = {self.n_a:.6g}",
            f"N_st (exact)        = {self.n_st:.6f}",
            f"N_st (N_th/C + N_0(1-xi)) = {self.n_st_approx:.4f}",
            f"  discrepancy       = {self.approx_discrepancy:+.3e}",
            f"cooperativity C     = {self.cooperativity:.6g}",
        ]
        if self.detuning_warning:
            lines.append("warning: approximation assumes delta_a == omega_m")
        if self.weak_coupling_warning:
            lines.append("warning: weak-coupling hierarchy gamma << G << kappa, r, omega_m not satisfied")
        return "\n".join(lines)


def cooling_report(model: ValidatedModel) -> CoolingReport:
    gamma_cool = cooling_rate(model)
    if gamma_cool <= 0:
        raise NotCooling(f"cooling rate {gamma_cool:.6g} <= 0")
    a_plus, a_minus = scattering_rates(model)
    approx = approx_steady_state(model)
    return CoolingReport(
        a_plus=a_plus,
        a_minus=a_minus,
        gamma_cool=gamma_cool,
        zeta=float(zeta(model.delta_a, model.kappa_a, model.omega_m)),
        n0=float(standard_backaction(model.delta_a, model.kappa_a, model.omega_m)),
        n_a=a_plus / gamma_cool,
        n_st=steady_state(model),
        cooperativity=approx.cooperativity,
        n_st_approx=approx.n_st,
        detuning_warning=approx.detuning_warning,
        weak_coupling_warning=weak_coupling_warning(model),
    )
