"""Full linear model of oscillator -> cavity <-> mechanics, solved exactly.

Quadratures are ordered ``(X_c, Y_c, X_a, Y_a, X_b, Y_b)`` with
``X = (o + o^dag)/sqrt(2)`` and ``Y = -i(o - o^dag)/sqrt(2)``, so vacuum has
variance 1/2.  Input noises are ``(c_in^s, c_in', a_in', b_in)``, two
quadratures each; the controlled channel ``c_in^s`` reaches both the
oscillator and (reflected) the cavity, which is what correlates them.

The output field of the oscillator is ``sqrt(2 kappa_c^s) c - c_in^s``,
consistent with the ``sqrt(2 kappa)`` noise normalization.  The anomalous
gain is ``chi exp(-2 i phi)``, which puts the reservoir correlation
``<c_out c_out> ~ exp(-2 i phi)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import solve_continuous_lyapunov, solve_sylvester

from .errors import SolverFailure, UnstableModel
from .params import ValidatedModel

QUADRATURES = ("X_c", "Y_c", "X_a", "Y_a", "X_b", "Y_b")
OSC, CAV, MECH = slice(0, 2), slice(2, 4), slice(4, 6)
MAX_CONDITION = 1e12
# for infeasible matching, the oscillator bandwidth stands in for r_+ -> infinity
INFINITE_BANDWIDTH_PROXY = 1e3

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(modes: int = 3) -> np.ndarray:
    return np.kron(np.eye(modes), _J)


@dataclass(frozen=True)
class LinearGaussianModel:
    """``du = drift u dt + noise_gain dW`` with ``<dW dW^T> = noise_corr dt``.

    ``noise_corr`` is the full (Hermitian, unsymmetrized) input correlation;
    ``diffusion`` is the real symmetric part of ``noise_gain noise_corr noise_gain^T``.
    """

    drift: np.ndarray
    diffusion: np.ndarray
    noise_gain: np.ndarray
    noise_corr: np.ndarray
    ordering: tuple = QUADRATURES

    @property
    def noise_commutator(self) -> np.ndarray:
        """Antisymmetric part ``B Omega_w B^T``, twice the imaginary part of the correlation."""
        full = self.noise_gain @ self.noise_corr @ self.noise_gain.T
        return 2.0 * full.imag


@dataclass(frozen=True)
class OracleResult:
    covariance: np.ndarray
    phonon_number: float
    stability_margin: float
    residual: float


def _noise_gain(model: ValidatedModel) -> np.ndarray:
    om, sq = model.optomech, model.squeezer
    eye = np.eye(2)
    b = np.zeros((6, 8))
    b[OSC, 0:2] = math.sqrt(2 * sq.kappa_c_s) * eye
    b[OSC, 2:4] = math.sqrt(2 * sq.kappa_c_loss) * eye
    b[CAV, 0:2] = -math.sqrt(2 * om.kappa_a_s) * eye
    b[CAV, 4:6] = math.sqrt(2 * om.kappa_a_loss) * eye
    b[MECH, 6:8] = math.sqrt(om.gamma) * eye
    return b


def build_model(model: ValidatedModel) -> LinearGaussianModel:
    om, sq = model.optomech, model.squeezer
    a = np.zeros((6, 6))
    theta = -2.0 * sq.phi
    chi = sq.chi
    a[OSC, OSC] = [[-sq.kappa_c + chi * math.cos(theta), chi * math.sin(theta)],
                   [chi * math.sin(theta), -sq.kappa_c - chi * math.cos(theta)]]
    a[CAV, CAV] = [[-om.kappa_a, om.delta_a], [-om.delta_a, -om.kappa_a]]
    a[MECH, MECH] = [[-0.5 * om.gamma, om.omega_m], [-om.omega_m, -0.5 * om.gamma]]
    # one-way feed of the oscillator output into the cavity
    a[CAV, OSC] = 2.0 * math.sqrt(om.kappa_a_s * sq.kappa_c_s) * np.eye(2)
    # i G (b + b^dag) in a-dot and i G (a + a^dag) in b-dot
    a[3, 4] = 2.0 * om.g
    a[5, 2] = 2.0 * om.g

    b = _noise_gain(model)
    corr = np.diag([0.5] * 6 + [om.n_th + 0.5] * 2) + 0.5j * symplectic_form(4)
    diffusion = (b @ corr @ b.T).real
    diffusion = 0.5 * (diffusion + diffusion.T)
    return LinearGaussianModel(a, diffusion, b, corr)


def stability_margin(drift: np.ndarray) -> float:
    return float(np.max(np.linalg.eigvals(drift).real))


def _check_stable(drift):
    margin = stability_margin(drift)
    if margin >= 0:
        raise UnstableModel(f"drift has eigenvalue with real part {margin:.3g} >= 0")
    return margin


def _kron_sum(a):
    n = a.shape[0]
    return np.kron(np.eye(n), a) + np.kron(a, np.eye(n))


def lyapunov_block_solve(a: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Solve ``A V + V A^T + D = 0`` exploiting the cascade's block-triangular drift.

    The oscillator block is solved on its own first, so its covariance is
    independent of everything downstream.
    """
    a11, a21, a22 = a[OSC, OSC], a[2:, OSC], a[2:, 2:]
    d11, d21, d22 = d[OSC, OSC], d[2:, OSC], d[2:, 2:]
    v11 = solve_continuous_lyapunov(a11, -d11)
    v21 = solve_sylvester(a22, a11.T, -(a21 @ v11 + d21))
    rhs22 = a21 @ v21.T + v21 @ a21.T + d22
    v22 = solve_continuous_lyapunov(a22, -rhs22)
    v = np.zeros_like(a)
    v[OSC, OSC] = 0.5 * (v11 + v11.T)
    v[2:, OSC] = v21
    v[OSC, 2:] = v21.T
    v[2:, 2:] = 0.5 * (v22 + v22.T)
    return v


def solve_steady_state(model: LinearGaussianModel) -> OracleResult:
    a, d = model.drift, model.diffusion
    margin = _check_stable(a)
    cond = np.linalg.cond(_kron_sum(a))
    if not cond < MAX_CONDITION:
        raise SolverFailure(f"Lyapunov operator condition estimate {cond:.3g} > {MAX_CONDITION:g}")
    v = lyapunov_block_solve(a, d)
    res = np.linalg.norm(a @ v + v @ a.T + d) / max(np.linalg.norm(d), np.finfo(float).tiny)
    phonons = 0.5 * (v[4, 4] + v[5, 5]) - 0.5
    return OracleResult(v, float(phonons), margin, float(res))


def output_spectrum(model: LinearGaussianModel, omega, c_out, e_out) -> np.ndarray:
    """Unsymmetrized spectra of outputs ``y = c_out u + e_out w``.

    ``S_ij(omega) = int dt e^{i omega t} <y_i(t) y_j(0)>``; returns shape
    ``(len(omega), k, k)`` for ``k`` outputs.
    """
    _check_stable(model.drift)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    n = model.drift.shape[0]
    resolvent = np.linalg.inv(-1j * omega[:, None, None] * np.eye(n) - model.drift)
    gain = c_out @ resolvent @ model.noise_gain + e_out
    return gain @ model.noise_corr @ np.conj(np.transpose(gain, (0, 2, 1)))


def transfer_spectrum(model: LinearGaussianModel, omega) -> np.ndarray:
    """Spectra of all six quadratures, shape ``(len(omega), 6, 6)``."""
    n, k = model.noise_gain.shape
    return output_spectrum(model, omega, np.eye(n), np.zeros((n, k)))


def oracle_force_spectrum(omega, model: LinearGaussianModel) -> np.ndarray:
    """Spectrum of ``a + a^dag`` (= sqrt(2) X_a) from the linear model's transfer function."""
    s = transfer_spectrum(model, omega)
    return 2.0 * s[:, 2, 2].real


def input_field_map(model: ValidatedModel):
    """``(C, E)`` such that the cavity input quadratures are ``C u + E w``.

    The cavity input is the normalized mix of the oscillator output through
    the controlled channel and the vacuum of the cavity loss channel.
    """
    om, sq = model.optomech, model.squeezer
    ka, ks = om.kappa_a, om.kappa_a_s
    eye = np.eye(2)
    c = np.zeros((2, 6))
    e = np.zeros((2, 8))
    c[:, OSC] = math.sqrt(ks / ka) * math.sqrt(2 * sq.kappa_c_s) * eye
    e[:, 0:2] = -math.sqrt(ks / ka) * eye
    e[:, 4:6] = math.sqrt(om.kappa_a_loss / ka) * eye
    return c, e


def oracle_squeezing_spectrum(omega, model: ValidatedModel, lin: LinearGaussianModel | None = None):
    """Noise of the maximally squeezed cavity-input quadrature, vacuum level 1.

    The quadrature is ``a_in e^{i(pi/2 + phi)} + h.c. = -sqrt(2)(X sin phi + Y cos phi)``.
    """
    lin = build_model(model) if lin is None else lin
    c, e = input_field_map(model)
    phi = model.phi
    rot = -math.sqrt(2.0) * np.array([[math.sin(phi), math.cos(phi)]])
    s = output_spectrum(lin, omega, rot @ c, rot @ e)
    return s[:, 0, 0].real


def export_matrices(model: LinearGaussianModel, result: OracleResult | None, directory) -> list[Path]:
    """Write drift, diffusion (and covariance) as row-major CSV, 17 significant digits."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    mats = {"drift": model.drift, "diffusion": model.diffusion}
    if result is not None:
        mats["covariance"] = result.covariance
    paths = []
    for name, mat in mats.items():
        path = directory / f"{name}.csv"
        np.savetxt(path, mat, delimiter=",", fmt="%.17g")
        paths.append(path)
    return paths
