"""Physical parameters of the optomechanical system and the squeezed-light source.

All rates and frequencies are dimensionless, in units of the mechanical
frequency.  ``OptomechParams.omega_m`` is kept as a field so that the
formulas read naturally, but the rest of the package assumes ``omega_m == 1``
unless a function states otherwise; :func:`normalize` rescales a parameter
set given in physical units.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import Infeasible, NegativeInput, NonPositiveRate, ThresholdViolation, DomainError

# (1 - s0)/xi above this is treated as at/above threshold (r_minus -> 0)
FEASIBILITY_MARGIN = 1e-12


def canonical_phase(phi: float) -> float:
    """Reduce a squeezing phase to [0, pi)."""
    p = math.fmod(phi, math.pi)
    if p < 0.0:
        p += math.pi
    if p >= math.pi:
        p = 0.0
    return p


@dataclass(frozen=True)
class OptomechParams:
    omega_m: float = 1.0
    gamma: float = 2e-7
    n_th: float = 1000.0
    kappa_a_s: float = 1.0
    kappa_a_loss: float = 0.0
    delta_a: float = 1.0
    g: float = 0.1

    @property
    def kappa_a(self) -> float:
        return self.kappa_a_s + self.kappa_a_loss


@dataclass(frozen=True)
class SqueezerParams:
    chi: float = 0.0
    kappa_c_s: float = 1.0
    kappa_c_loss: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi", canonical_phase(float(self.phi)))

    @property
    def kappa_c(self) -> float:
        return self.kappa_c_s + self.kappa_c_loss


@dataclass(frozen=True)
class ValidatedModel:
    """Parameter pair that passed :func:`validate`, with derived rates."""

    optomech: OptomechParams
    squeezer: SqueezerParams
    r_plus: float = field(init=False)
    r_minus: float = field(init=False)
    xi: float = field(init=False)

    def __post_init__(self):
        sq = self.squeezer
        om = self.optomech
        object.__setattr__(self, "r_plus", sq.kappa_c + sq.chi)
        object.__setattr__(self, "r_minus", sq.kappa_c - sq.chi)
        object.__setattr__(
            self, "xi", loss_factor(om.kappa_a_s, om.kappa_a_loss, sq.kappa_c_s, sq.kappa_c_loss)
        )

    # shorthand used all over the numerics
    @property
    def kappa_a(self) -> float:
        return self.optomech.kappa_a

    @property
    def kappa_c(self) -> float:
        return self.squeezer.kappa_c

    @property
    def chi(self) -> float:
        return self.squeezer.chi

    @property
    def phi(self) -> float:
        return self.squeezer.phi

    @property
    def delta_a(self) -> float:
        return self.optomech.delta_a

    @property
    def g(self) -> float:
        return self.optomech.g

    @property
    def omega_m(self) -> float:
        return self.optomech.omega_m

    def with_optomech(self, **changes) -> "ValidatedModel":
        return validate(replace(self.optomech, **changes), self.squeezer)

    def with_squeezer(self, **changes) -> "ValidatedModel":
        return validate(self.optomech, replace(self.squeezer, **changes))


def _check_finite(name, value):
    if not math.isfinite(value):
        raise NegativeInput(f"{name} must be finite, got {value!r}")


def loss_factor(kappa_a_s, kappa_a_loss, kappa_c_s, kappa_c_loss) -> float:
    """Fraction of the cavity input that is the controlled squeezed field.

    Equals 1 only when neither the cavity nor the oscillator has an
    uncontrolled loss channel.
    """
    for name, v in (("kappa_a_s", kappa_a_s), ("kappa_a_loss", kappa_a_loss),
                    ("kappa_c_s", kappa_c_s), ("kappa_c_loss", kappa_c_loss)):
        _check_finite(name, v)
        if v < 0:
            raise NegativeInput(f"{name} must be >= 0, got {v}")
    kappa_a = kappa_a_s + kappa_a_loss
    kappa_c = kappa_c_s + kappa_c_loss
    if kappa_a <= 0:
        raise NonPositiveRate(f"total cavity decay kappa_a must be > 0, got {kappa_a}")
    if kappa_c <= 0:
        raise NonPositiveRate(f"total oscillator decay kappa_c must be > 0, got {kappa_c}")
    return (kappa_a_s / kappa_a) * (kappa_c_s / kappa_c)


def validate(optomech: OptomechParams, squeezer: SqueezerParams) -> ValidatedModel:
    """Check every parameter constraint and attach ``r_plus``, ``r_minus``, ``xi``."""
    om, sq = optomech, squeezer
    for name in ("omega_m", "gamma", "n_th", "kappa_a_s", "kappa_a_loss", "delta_a", "g"):
        _check_finite(name, getattr(om, name))
    for name in ("chi", "kappa_c_s", "kappa_c_loss", "phi"):
        _check_finite(name, getattr(sq, name))
    if om.omega_m <= 0:
        raise NonPositiveRate(f"omega_m must be > 0, got {om.omega_m}")
    if om.gamma <= 0:
        raise NonPositiveRate(f"gamma must be > 0, got {om.gamma}")
    for name in ("n_th", "g"):
        if getattr(om, name) < 0:
            raise NegativeInput(f"{name} must be >= 0, got {getattr(om, name)}")
    if sq.chi < 0:
        raise NegativeInput(f"chi must be >= 0, got {sq.chi}")
    # raises on negative or non-positive channel rates
    loss_factor(om.kappa_a_s, om.kappa_a_loss, sq.kappa_c_s, sq.kappa_c_loss)
    if sq.chi >= sq.kappa_c:
        raise ThresholdViolation(
            f"oscillator above threshold: chi={sq.chi} >= kappa_c={sq.kappa_c}"
        )
    return ValidatedModel(om, sq)


def from_observables(s0: float, r_plus: float, xi: float, phi: float = 0.0) -> SqueezerParams:
    """Oscillator parameters that produce squeezing ``s0`` at zero frequency
    over bandwidth ``r_plus`` when a fraction ``xi`` of the field is pure.

    Solves ``chi + kappa_c = r_plus`` and ``chi*kappa_c = (1 - s0) r_plus**2 / (4 xi)``
    on the below-threshold root.  The returned oscillator has no loss
    channel; the overall ``xi`` must be realized by the cavity split.
    """
    if not (0.0 < s0 <= 1.0):
        raise DomainError(f"s0 must lie in (0, 1], got {s0}")
    if not (r_plus > 0.0 and math.isfinite(r_plus)):
        raise DomainError(f"r_plus must be positive and finite, got {r_plus}")
    if not (0.0 < xi <= 1.0):
        raise DomainError(f"xi must lie in (0, 1], got {xi}")
    u = (1.0 - s0) / xi
    if u >= 1.0 - FEASIBILITY_MARGIN:
        raise Infeasible(
            f"S(0)={s0} needs (1-S0)/xi={u:.6g} >= 1: no below-threshold oscillator "
            f"reaches this squeezing at purity xi={xi}"
        )
    root = math.sqrt(1.0 - u)
    kappa_c = 0.5 * r_plus * (1.0 + root)
    # chi from the product keeps full precision when u is small
    chi = 0.25 * (1.0 - s0) * r_plus**2 / xi / kappa_c
    return SqueezerParams(chi=chi, kappa_c_s=kappa_c, kappa_c_loss=0.0, phi=phi)


def split_cavity(kappa_a: float, xi: float) -> tuple[float, float]:
    """Cavity channel split ``(kappa_a_s, kappa_a_loss)`` realizing purity ``xi``
    with a lossless oscillator."""
    if not (0.0 <= xi <= 1.0):
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    return xi * kappa_a, (1.0 - xi) * kappa_a


def squeezed_model(optomech: OptomechParams, s0: float, r_plus: float, phi: float,
                   xi: float | None = None) -> ValidatedModel:
    """Model driven by squeezing given through its observables.

    When ``xi`` is given, the cavity decay is re-split to realize it;
    otherwise the split already in ``optomech`` sets it.  ``xi == 0`` (the
    source is disconnected, ``s0`` is ignored) or ``s0 == 1`` yields a
    vacuum-driven model with ``chi = 0``.
    """
    if xi is not None:
        ks, kl = split_cavity(optomech.kappa_a, xi)
        optomech = replace(optomech, kappa_a_s=ks, kappa_a_loss=kl)
    xi_eff = optomech.kappa_a_s / optomech.kappa_a if optomech.kappa_a > 0 else 0.0
    if xi_eff == 0.0 or s0 == 1.0:
        return validate(optomech, SqueezerParams(chi=0.0, kappa_c_s=r_plus, phi=phi))
    return validate(optomech, from_observables(s0, r_plus, xi_eff, phi))


def normalize(optomech: OptomechParams, squeezer: SqueezerParams) -> tuple[OptomechParams, SqueezerParams]:
    """Rescale parameters given in physical units so that ``omega_m == 1``."""
    w = optomech.omega_m
    if not w > 0:
        raise NonPositiveRate(f"omega_m must be > 0, got {w}")
    om = OptomechParams(
        omega_m=1.0, gamma=optomech.gamma / w, n_th=optomech.n_th,
        kappa_a_s=optomech.kappa_a_s / w, kappa_a_loss=optomech.kappa_a_loss / w,
        delta_a=optomech.delta_a / w, g=optomech.g / w,
    )
    sq = SqueezerParams(
        chi=squeezer.chi / w, kappa_c_s=squeezer.kappa_c_s / w,
        kappa_c_loss=squeezer.kappa_c_loss / w, phi=squeezer.phi,
    )
    return om, sq
