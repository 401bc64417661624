"""Plain-text ``key = value`` configuration and ``--set`` overrides.

The squeezer may be given directly (``chi``, ``kappa_c_s``, ``kappa_c_loss``)
or through its observables (``s0``, ``r_plus``).  ``phi = opt`` selects the
optimal phase and ``r_plus = matched`` the matched bandwidth.  Anything not
set falls back to the reference configuration used by the default sweeps.  A value of
``omega_m`` other than 1 declares physical units; all rates are divided by it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DomainError
from .optimizer import matched_bandwidth, optimal_phase
from .oracle import INFINITE_BANDWIDTH_PROXY
from .params import OptomechParams, SqueezerParams, ValidatedModel, from_observables, validate
from .spectra import input_squeezing_spectrum

OPTOMECH_KEYS = ("omega_m", "gamma", "n_th", "kappa_a_s", "kappa_a_loss", "delta_a", "g")
SQUEEZER_KEYS = ("chi", "kappa_c_s", "kappa_c_loss", "phi", "s0", "r_plus")
DIRECT_KEYS = ("chi", "kappa_c_s", "kappa_c_loss")
OBSERVABLE_KEYS = ("s0", "r_plus")

DEFAULTS = {
    "omega_m": "1", "gamma": "2e-7", "n_th": "1000", "kappa_a_s": "1", "kappa_a_loss": "0",
    "delta_a": "1", "g": "0.1", "phi": "opt", "s0": "0.3", "r_plus": "matched",
    "chi": "0", "kappa_c_s": "1", "kappa_c_loss": "0",
}


def _canonical_key(key: str) -> str:
    key = key.strip()
    if "." in key:
        group, _, name = key.partition(".")
        allowed = {"optomech": OPTOMECH_KEYS, "squeezer": SQUEEZER_KEYS}.get(group)
        if allowed is None or name not in allowed:
            raise ConfigError(f"unknown key {key!r}")
        return name
    if key not in OPTOMECH_KEYS + SQUEEZER_KEYS:
        raise ConfigError(f"unknown key {key!r}")
    return key


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``[optomech]``/``[squeezer]`` headers scope the keys below them."""
    cfg = {}
    section = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("optomech", "squeezer"):
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        try:
            key = key.strip()
            name = _canonical_key(f"{section}.{key}" if section and "." not in key else key)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        if not value.strip():
            raise ConfigError(f"line {lineno}: empty value for {name}")
        cfg[name] = value.strip()
    return cfg


def read_config(path) -> dict[str, str]:
    return parse_config(Path(path).read_text())


def apply_overrides(cfg: dict[str, str], overrides) -> dict[str, str]:
    out = dict(cfg)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override must be KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        out[_canonical_key(key)] = value.strip()
    return out


def _number(cfg, key) -> float:
    raw = cfg.get(key, DEFAULTS[key])
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from None


@dataclass(frozen=True)
class ConfiguredModel:
    """A validated model plus how its squeezing was derived."""

    model: ValidatedModel
    s0: float
    matched: bool | None  # None when r_plus was given explicitly
    phase_optimal: bool = True
    note: str = ""


def model_from_config(cfg: dict[str, str]) -> ConfiguredModel:
    direct = [k for k in DIRECT_KEYS if k in cfg]
    observed = [k for k in OBSERVABLE_KEYS if k in cfg]
    if direct and observed:
        raise ConfigError(f"give the squeezer either by {direct} or by {observed}, not both")
    w = _number(cfg, "omega_m")
    if not w > 0:
        raise ConfigError(f"omega_m must be > 0, got {w}")

    def rate(key):
        return _number(cfg, key) / w

    om = OptomechParams(
        omega_m=1.0, gamma=rate("gamma"), n_th=_number(cfg, "n_th"),
        kappa_a_s=rate("kappa_a_s"), kappa_a_loss=rate("kappa_a_loss"),
        delta_a=rate("delta_a"), g=rate("g"),
    )
    phi_raw = cfg.get("phi", DEFAULTS["phi"]).lower()
    phase_optimal = phi_raw in ("opt", "optimal")
    if phase_optimal:
        phi = optimal_phase(om.delta_a, om.kappa_a)
    else:
        phi = _number(cfg, "phi")

    if direct:
        sq = SqueezerParams(chi=rate("chi"), kappa_c_s=rate("kappa_c_s"),
                            kappa_c_loss=rate("kappa_c_loss"), phi=phi)
        model = validate(om, sq)
        return ConfiguredModel(model, float(input_squeezing_spectrum(0.0, model)), None,
                               phase_optimal)

    # observable mode: lossless oscillator, purity set by the cavity split
    s0 = _number(cfg, "s0")
    validate(om, SqueezerParams())
    xi = om.kappa_a_s / om.kappa_a
    r_raw = cfg.get("r_plus", DEFAULTS["r_plus"]).lower()
    note = ""
    matched = None
    if r_raw == "matched":
        if xi == 0.0 or s0 == 1.0:
            r_plus, matched = 1.0, False
            note = "no squeezing reaches the cavity; bandwidth irrelevant"
        else:
            mb = matched_bandwidth(s0, xi, om.delta_a, om.kappa_a)
            matched = mb.feasible
            if mb.feasible:
                r_plus = mb.r_plus
            else:
                r_plus = INFINITE_BANDWIDTH_PROXY
                note = (f"S(0)={s0:g} above matching threshold {mb.s0_threshold:.6g}; "
                        f"using r_+ = {INFINITE_BANDWIDTH_PROXY:g} as the infinite-bandwidth proxy")
    else:
        r_plus = rate("r_plus")
    if xi == 0.0 or s0 == 1.0:
        sq = SqueezerParams(chi=0.0, kappa_c_s=r_plus, phi=phi)
    else:
        if not math.isfinite(r_plus) or r_plus <= 0:
            raise DomainError(f"r_plus must be positive and finite, got {r_plus}")
        sq = from_observables(s0, r_plus, xi, phi)
    return ConfiguredModel(validate(om, sq), s0, matched, phase_optimal, note)


def load(path=None, overrides=()) -> ConfiguredModel:
    cfg = read_config(path) if path else {}
    return model_from_config(apply_overrides(cfg, overrides))

