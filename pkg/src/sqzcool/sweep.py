"""Deterministic parameter sweeps and their CSV output.

Grids are evaluated column-wise with numpy in fixed-size chunks that are
spread over a thread pool and gathered back in order, so the numbers (and
the CSV bytes) do not depend on the number of threads.
"""
from __future__ import annotations

import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .cooling import closed_form_cooling_rate
from .errors import DomainError, EmptyInput, Infeasible
from .optimizer import MATCH_EPS, optimize_detuning
from .params import FEASIBILITY_MARGIN
from .spectra import _reservoir_spectra, _sideband_spectrum

COLUMNS = (
    "series", "xi", "s0", "r_plus", "kappa_a", "delta_a", "phi", "feasible",
    "n_tilde", "m_tilde", "s_a_minus", "s_a_plus", "gamma_cool", "n_a", "n_st",
)
AXIS_NAMES = ("phi", "s0", "r_plus", "kappa_a", "delta_a")
CHUNK = 4096
TRACE_WINDOW = (0.05, 10.0)


def thread_count() -> int:
    raw = os.environ.get("SQZCOOL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    points: int
    log: bool = False

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DomainError(f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}")
        if self.points < 2:
            raise DomainError(f"axis {self.name} needs at least 2 points")
        if not self.lo < self.hi:
            raise DomainError(f"axis {self.name} needs min < max, got {self.lo} >= {self.hi}")
        if self.log and self.lo <= 0:
            raise DomainError(f"log axis {self.name} needs min > 0")

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class FixedParams:
    """Parameters held constant across a sweep (reference cooling values by default)."""

    gamma: float = 2e-7
    n_th: float = 1000.0
    g: float = 0.1
    kappa_a: float = 1.0
    delta_a: float = 1.0
    s0: float = 0.3
    xi: float = 1.0
    r_plus: float = math.inf
    phi: float = 0.0


@dataclass(frozen=True)
class SweepSpec:
    """Grid axes, fixed parameters and the per-point derivation rules.

    ``phase`` is ``"optimal"`` or ``"fixed"``; ``bandwidth`` is ``"matched"``
    (with the infinite-bandwidth limit where matching fails) or ``"fixed"``.
    An axis always overrides the corresponding rule.
    """

    axes: tuple[Axis, ...]
    fixed: FixedParams = field(default_factory=FixedParams)
    phase: str = "optimal"
    bandwidth: str = "matched"
    series: str = ""

    def __post_init__(self):
        names = [a.name for a in self.axes]
        if not names:
            raise DomainError("a sweep needs at least one axis")
        if len(set(names)) != len(names):
            raise DomainError(f"repeated sweep axis in {names}")
        if self.phase not in ("optimal", "fixed"):
            raise DomainError(f"phase rule must be 'optimal' or 'fixed', got {self.phase!r}")
        if self.bandwidth not in ("matched", "fixed"):
            raise DomainError(f"bandwidth rule must be 'matched' or 'fixed', got {self.bandwidth!r}")


class SweepRecord(NamedTuple):
    series: str
    xi: float
    s0: float
    r_plus: float
    kappa_a: float
    delta_a: float
    phi: float
    feasible: bool
    n_tilde: float
    m_tilde: float
    s_a_minus: float
    s_a_plus: float
    gamma_cool: float
    n_a: float
    n_st: float


@dataclass
class SweepTable:
    """Column-oriented sweep result; one row per grid point in row-major axis order."""

    series: str
    columns: dict

    def __len__(self):
        return len(self.columns["n_st"])

    def records(self) -> list[SweepRecord]:
        cols = [self.columns[c] for c in COLUMNS[1:]]
        return [SweepRecord(self.series, *(c[i].item() for c in cols)) for i in range(len(self))]


def _evaluate(s0, r_plus, kappa_a, delta_a, phi, fp: FixedParams, matched: bool):
    """Sideband quantities on flat arrays; ``r_plus = inf`` selects the infinite-bandwidth limit."""
    xi = fp.xi
    w = 1.0
    if matched:
        z = np.sqrt((kappa_a**2 + (delta_a - w) ** 2) / (kappa_a**2 + (delta_a + w) ** 2))
        if xi > 0:
            rhs = (1.0 - s0) * (1.0 + z) / (2.0 * xi * z) - 1.0
            feasible = rhs > MATCH_EPS
            r_plus = np.where(feasible, w / np.sqrt(np.where(feasible, rhs, 1.0)), np.inf)
        else:
            feasible = np.zeros(s0.shape, dtype=bool)
            r_plus = np.full(s0.shape, np.inf)
    else:
        feasible = np.ones(s0.shape, dtype=bool)

    if xi == 0.0:
        # source disconnected from the cavity; s0 is only a coordinate
        n = np.zeros(s0.shape)
        m = np.zeros(s0.shape)
    else:
        u = (1.0 - s0) / xi
        if np.any(u >= 1.0 - FEASIBILITY_MARGIN):
            bad = float(np.min(s0[u >= 1.0 - FEASIBILITY_MARGIN]))
            raise Infeasible(f"S(0)={bad} is unreachable below threshold at xi={xi}")
        finite = np.isfinite(r_plus)
        rp = np.where(finite, r_plus, 1.0)
        kappa_c = 0.5 * rp * (1.0 + np.sqrt(1.0 - u))
        chi = 0.25 * (1.0 - s0) * rp**2 / xi / kappa_c
        n_fin, m_fin = _reservoir_spectra(w, chi, kappa_c, xi)
        # r_+ -> infinity at fixed S(0)
        a = 0.25 * (1.0 - s0)
        n_inf = a * u / (1.0 - u)
        m_inf = a * (2.0 - u) / (1.0 - u)
        n = np.where(finite, n_fin, n_inf)
        m = np.where(finite, m_fin, m_inf)

    s_minus = _sideband_spectrum(-w, kappa_a, delta_a, phi, n, m)
    s_plus = _sideband_spectrum(w, kappa_a, delta_a, phi, n, m)
    gamma_cool = closed_form_cooling_rate(delta_a, kappa_a, fp.g, w)
    a_plus = fp.g**2 * s_minus
    with np.errstate(divide="ignore", invalid="ignore"):
        n_a = a_plus / gamma_cool
    n_st = (fp.gamma * fp.n_th + a_plus) / (fp.gamma + gamma_cool)
    return {
        "xi": np.full(s0.shape, xi), "s0": s0, "r_plus": r_plus, "kappa_a": kappa_a,
        "delta_a": delta_a, "phi": phi, "feasible": feasible, "n_tilde": n, "m_tilde": m,
        "s_a_minus": s_minus, "s_a_plus": s_plus, "gamma_cool": gamma_cool, "n_a": n_a,
        "n_st": n_st,
    }


def _point_arrays(spec: SweepSpec):
    fp = spec.fixed
    grids = np.meshgrid(*[a.values() for a in spec.axes], indexing="ij")
    shape = grids[0].shape
    cols = {name: np.full(shape, getattr(fp, name), dtype=float) for name in AXIS_NAMES}
    for axis, grid in zip(spec.axes, grids):
        cols[axis.name] = grid
    cols = {k: v.ravel() for k, v in cols.items()}
    names = {a.name for a in spec.axes}
    if "phi" not in names and spec.phase == "optimal":
        d, k = cols["delta_a"], cols["kappa_a"]
        if np.any(d <= 0):
            raise DomainError("optimal phase needs delta_a > 0")
        angle = np.arctan2(2.0 * d * k, d * d - 1.0 - k * k)
        cols["phi"] = np.mod(0.5 * angle, np.pi)
    matched = "r_plus" not in names and spec.bandwidth == "matched"
    return cols, matched


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepTable:
    cols, matched = _point_arrays(spec)
    total = len(cols["s0"])
    bounds = [(i, min(i + CHUNK, total)) for i in range(0, total, CHUNK)]

    def work(b):
        lo, hi = b
        return _evaluate(cols["s0"][lo:hi], cols["r_plus"][lo:hi], cols["kappa_a"][lo:hi],
                         cols["delta_a"][lo:hi], cols["phi"][lo:hi], spec.fixed, matched)

    threads = thread_count() if threads is None else threads
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    out = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    return SweepTable(spec.series, out)


def _require_axes(spec, allowed, what):
    names = {a.name for a in spec.axes}
    if not names <= set(allowed):
        raise DomainError(f"{what} sweep accepts axes {allowed}, got {sorted(names)}")


def sweep_phase(spec: SweepSpec, threads=None) -> SweepTable:
    """Occupancy versus squeezing phase (matched bandwidth)."""
    _require_axes(spec, ("phi",), "phase")
    return run_sweep(spec, threads)


def sweep_squeezing(spec: SweepSpec, threads=None) -> SweepTable:
    """Occupancy over squeezing strength and bandwidth at the optimal phase."""
    _require_axes(spec, ("s0", "r_plus"), "squeezing")
    return run_sweep(replace(spec, phase="optimal"), threads)


def sweep_cavity(spec: SweepSpec, threads=None) -> SweepTable:
    """Occupancy over cavity linewidth and detuning, phase and bandwidth optimized."""
    _require_axes(spec, ("kappa_a", "delta_a"), "cavity")
    return run_sweep(replace(spec, phase="optimal", bandwidth="matched"), threads)


def detuning_trace(kappas, fixed: FixedParams, series: str, window=TRACE_WINDOW,
                   threads=None) -> SweepTable:
    """Records at the occupancy-minimizing detuning for each linewidth."""
    kappas = np.asarray(kappas, dtype=float)

    def work(k):
        return optimize_detuning(k, fixed.s0, fixed.xi, fixed.gamma, fixed.n_th, fixed.g,
                                 window=window).delta_opt

    threads = thread_count() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            deltas = np.array(list(pool.map(work, kappas)))
    else:
        deltas = np.array([work(k) for k in kappas])
    d = deltas
    angle = np.arctan2(2.0 * d * kappas, d * d - 1.0 - kappas * kappas)
    phi = np.mod(0.5 * angle, np.pi)
    s0 = np.full(d.shape, fixed.s0)
    cols = _evaluate(s0, np.full(d.shape, np.inf), kappas, d, phi, fixed, matched=True)
    return SweepTable(series, cols)


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return "%.12g" % value


def render_csv(tables: Iterable[SweepTable]) -> str:
    tables = [t for t in tables if len(t)]
    if not tables:
        raise EmptyInput("no sweep records to write")
    buf = io.StringIO()
    buf.write(",".join(COLUMNS) + "\n")
    for t in tables:
        cols = [t.columns[c] for c in COLUMNS[1:]]
        bool_col = COLUMNS[1:].index("feasible")
        for i in range(len(t)):
            cells = [t.series]
            for j, c in enumerate(cols):
                v = c[i]
                cells.append(_format(bool(v)) if j == bool_col else "%.12g" % v)
            buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def emit_csv(tables, destination) -> int:
    """Write tables as one CSV to a path (or ``"-"`` / None for stdout); returns bytes written."""
    if isinstance(tables, SweepTable):
        tables = [tables]
    data = render_csv(tables).encode()
    if destination is None or str(destination) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(destination).write_bytes(data)
    return len(data)


def _series(prefix, xi):
    return f"{prefix}_xi={xi:g}"


def _realizable_s0_lo(lo, xi):
    # S(0) below 1 - xi cannot be produced by a below-threshold oscillator
    return max(lo, 1.0 - xi + 5e-3) if 0 < xi < 1 else lo


def figure_1b(points=721, xis=(1.0, 0.8, 0.0), fixed=FixedParams(), threads=None):
    tables = []
    for xi in xis:
        spec = SweepSpec((Axis("phi", 0.0, 2 * math.pi, points),), replace(fixed, xi=xi),
                         series=_series("phase", xi))
        tables.append(sweep_phase(spec, threads))
    return tables


def figure_2(points=201, xis=(1.0, 0.8, 0.0), fixed=FixedParams(), threads=None):
    s0_axis = Axis("s0", 0.05, 1.0, points)
    grid = SweepSpec((s0_axis, Axis("r_plus", 0.5, 20.0, points, log=True)),
                     replace(fixed, xi=1.0), series=_series("grid", 1.0))
    tables = [sweep_squeezing(grid, threads)]
    for xi in xis:
        axis = replace(s0_axis, lo=_realizable_s0_lo(s0_axis.lo, xi))
        spec = SweepSpec((axis,), replace(fixed, xi=xi), series=_series("matched", xi))
        tables.append(run_sweep(spec, threads))
    return tables


def figure_3(points=201, xis=(1.0, 0.8, 0.0), fixed=FixedParams(), threads=None):
    kappa_axis = Axis("kappa_a", 0.05, 5.0, points, log=True)
    grid = SweepSpec((kappa_axis, Axis("delta_a", 0.2, 3.0, points)),
                     replace(fixed, xi=1.0), series=_series("grid", 1.0))
    tables = [sweep_cavity(grid, threads)]
    for xi in xis:
        fp = replace(fixed, xi=xi)
        tables.append(detuning_trace(kappa_axis.values(), fp, _series("trace", xi), threads=threads))
    return tables


FIGURES = {"fig1b.csv": figure_1b, "fig2.csv": figure_2, "fig3.csv": figure_3}


def write_figures(directory, threads=None) -> dict:
    """Run the three default figure sweeps into ``directory``; returns byte counts per file."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    return {name: emit_csv(make(threads=threads), directory / name) for name, make in FIGURES.items()}
