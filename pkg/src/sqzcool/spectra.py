"""Squeezed-reservoir correlations and the spectra built from them.

The raw kernels (leading underscore) take plain floats or numpy arrays so the
sweep code can evaluate whole grids at once; the public functions take a
:class:`~sqzcool.params.ValidatedModel`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ValidatedModel


def _reservoir_spectra(omega, chi, kappa_c, xi):
    """Excess photon number and self-correlation spectra (n~, m~).

    Uses ``r_+^2 - r_-^2 = 4 chi kappa_c`` so that n~ has no subtractive
    cancellation when the two Lorentzians are nearly equal.
    """
    omega = np.asarray(omega, dtype=float)
    r_p = kappa_c + chi
    r_m = kappa_c - chi
    d_m = r_m * r_m + omega * omega
    d_p = r_p * r_p + omega * omega
    pref = xi * chi * kappa_c
    denom = d_m * d_p
    n = pref * (4.0 * chi * kappa_c) / denom
    m = pref * (d_m + d_p) / denom
    return n, m


def _sideband_spectrum(omega, kappa_a, delta_a, phi, n, m):
    """Force (intracavity amplitude-quadrature) spectrum from reservoir values.

    ``n`` and ``m`` are n~ and m~ evaluated at the same ``omega``.
    """
    omega = np.asarray(omega, dtype=float)
    lor_m = kappa_a * kappa_a + (delta_a - omega) ** 2
    lor_p = kappa_a * kappa_a + (delta_a + omega) ** 2
    phase = ((delta_a * delta_a - kappa_a * kappa_a - omega * omega) * np.cos(2.0 * phi)
             + 2.0 * kappa_a * delta_a * np.sin(2.0 * phi))
    return (2.0 * kappa_a / lor_m) * (1.0 + n * (1.0 + lor_m / lor_p) - 2.0 * m * phase / lor_p)


def time_correlations(tau, model: ValidatedModel):
    """Loss-scaled reservoir correlations ``(n_xi(tau), |m_xi(tau)|)``.

    The ``exp(-2i phi)`` factor of the anomalous correlation is left to the
    consumer.  The prefactor uses the total oscillator linewidth with the
    controlled-channel fraction carried by ``xi``, which keeps these the exact
    Fourier partners of :func:`n_tilde` and :func:`m_tilde`.
    """
    tau = np.abs(np.asarray(tau, dtype=float))
    r_p, r_m = model.r_plus, model.r_minus
    pref = 0.5 * model.xi * model.chi * model.kappa_c
    slow = np.exp(-r_m * tau) / r_m
    fast = np.exp(-r_p * tau) / r_p
    return pref * (slow - fast), pref * (slow + fast)


def n_tilde(omega, model: ValidatedModel):
    return _reservoir_spectra(omega, model.chi, model.kappa_c, model.xi)[0]


def m_tilde(omega, model: ValidatedModel):
    return _reservoir_spectra(omega, model.chi, model.kappa_c, model.xi)[1]


def input_squeezing_spectrum(omega, model: ValidatedModel):
    """Noise of the maximally squeezed input quadrature, vacuum level 1.

    Equal to ``1 + 2 n~ - 2 m~``, evaluated as ``1 - 4 xi chi kappa_c / (r_+^2 + omega^2)``.
    """
    omega = np.asarray(omega, dtype=float)
    return 1.0 - 4.0 * model.xi * model.chi * model.kappa_c / (model.r_plus**2 + omega * omega)


def force_spectrum(omega, model: ValidatedModel):
    """Radiation-pressure force spectrum s_a(omega) of the empty cavity."""
    n, m = _reservoir_spectra(omega, model.chi, model.kappa_c, model.xi)
    return _sideband_spectrum(omega, model.kappa_a, model.delta_a, model.phi, n, m)


@dataclass(frozen=True)
class SpectraPoint:
    omega: float
    n_tilde: float
    m_tilde: float
    s_in: float
    s_force: float


def spectra_point(omega: float, model: ValidatedModel) -> SpectraPoint:
    n, m = _reservoir_spectra(omega, model.chi, model.kappa_c, model.xi)
    return SpectraPoint(
        omega=float(omega),
        n_tilde=float(n),
        m_tilde=float(m),
        s_in=float(input_squeezing_spectrum(omega, model)),
        s_force=float(_sideband_spectrum(omega, model.kappa_a, model.delta_a, model.phi, n, m)),
    )


def default_grid(points: int = 2001, span: float = 3.0):
    """Uniform frequency grid resolving the Fano dip of the force spectrum."""
    return np.linspace(-span, span, points)
