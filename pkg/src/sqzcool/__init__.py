"""Sideband cooling of a mechanical oscillator driven by squeezed light."""
from .cooling import (CoolingReport, approx_steady_state, backaction_limit, cooling_rate,
                      cooling_report, scattering_rates, steady_state)
from .errors import (DomainError, Infeasible, NotCooling, SqzCoolError, UnstableModel,
                     ValidationError)
from .optimizer import (matched_bandwidth, optimal_phase, optimal_squeezing, optimize_detuning)
from .oracle import build_model, solve_steady_state
from .params import (OptomechParams, SqueezerParams, ValidatedModel, from_observables,
                     squeezed_model, validate)
from .spectra import force_spectrum, input_squeezing_spectrum, m_tilde, n_tilde

__version__ = "0.1.0"

__all__ = [
    "CoolingReport", "approx_steady_state", "backaction_limit", "cooling_rate", "cooling_report",
    "scattering_rates", "steady_state", "DomainError", "Infeasible", "NotCooling", "SqzCoolError",
    "UnstableModel", "ValidationError", "matched_bandwidth", "optimal_phase", "optimal_squeezing",
    "optimize_detuning", "build_model", "solve_steady_state", "OptomechParams", "SqueezerParams",
    "ValidatedModel", "from_observables", "squeezed_model", "validate", "force_spectrum",
    "input_squeezing_spectrum", "m_tilde", "n_tilde",
]
