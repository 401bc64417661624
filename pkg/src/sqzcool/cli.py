"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 infeasible squeezing reported as
the primary result, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .cooling import cooling_report, steady_state
from .errors import Infeasible, NoMinimumInWindow, SqzCoolError
from .optimizer import optimal_squeezing, optimize_detuning
from .oracle import (build_model, export_matrices, oracle_force_spectrum,
                     oracle_squeezing_spectrum, solve_steady_state)
from .spectra import force_spectrum, input_squeezing_spectrum, m_tilde, n_tilde
from .sweep import (Axis, FixedParams, SweepSpec, detuning_trace, emit_csv, sweep_cavity,
                    sweep_phase, sweep_squeezing, write_figures)

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2, 3

DEFAULT_AXES = {
    "phase": [Axis("phi", 0.0, 2 * math.pi, 721)],
    "squeezing": [Axis("s0", 0.05, 1.0, 201), Axis("r_plus", 0.5, 20.0, 201, log=True)],
    "cavity": [Axis("kappa_a", 0.05, 5.0, 201, log=True), Axis("delta_a", 0.2, 3.0, 201)],
}
SWEEPS = {"phase": sweep_phase, "squeezing": sweep_squeezing, "cavity": sweep_cavity}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _grid(text: str):
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX:N, got {text!r}") from None


def _axis(text: str) -> Axis:
    try:
        name, _, rest = text.partition("=")
        parts = rest.split(":")
        log = len(parts) == 4 and parts[3] == "log"
        if len(parts) not in (3, 4) or (len(parts) == 4 and not log):
            raise ValueError
        return Axis(name.strip(), float(parts[0]), float(parts[1]), int(parts[2]), log)
    except (ValueError, SqzCoolError) as exc:
        raise argparse.ArgumentTypeError(f"expected NAME=MIN:MAX:N[:log], got {text!r} ({exc})") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value parameter file")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[], dest="overrides",
                        help="override a config key, e.g. --set squeezer.chi=0.6 (repeatable)")
    common.add_argument("--out", metavar="PATH", help="output file (directory for 'figures'); default stdout")
    common.add_argument("--format", choices=("csv", "human"), default="human", help="output format")

    parser = _Parser(prog="sqzcool", description="Optomechanical cooling with squeezed light.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="reservoir, input and force spectra on a grid")
    p.add_argument("--omega", type=_grid, default=(-3.0, 3.0, 2001), metavar="MIN:MAX:N",
                   help="frequency grid in units of omega_m; write --omega=-3:3:2001 when MIN is negative")

    sub.add_parser("cool", parents=[common], help="cooling report: rates, back-action, occupancy")

    p = sub.add_parser("optimize", parents=[common], help="optimal phase, matched bandwidth, best detuning")
    p.add_argument("--window", type=lambda s: tuple(float(x) for x in s.split(":")), default=(0.05, 10.0),
                   metavar="LO:HI", help="detuning search window (default 0.05:10)")

    p = sub.add_parser("sweep", parents=[common], help="one figure-style parameter sweep as CSV")
    p.add_argument("kind", choices=sorted(DEFAULT_AXES))
    p.add_argument("--axis", type=_axis, action="append", default=[], metavar="NAME=MIN:MAX:N[:log]",
                   help="grid axis (repeatable); defaults reproduce the figure grids")
    p.add_argument("--trace", action="store_true",
                   help="cavity sweep: append the occupancy-minimizing detuning trace")

    p = sub.add_parser("oracle-check", parents=[common], help="compare analytic results with the full linear model")
    p.add_argument("--g", type=float, metavar="VALUE", help="optomechanical coupling override")
    p.add_argument("--export", metavar="DIR", help="write drift/diffusion/covariance CSV files here")

    sub.add_parser("figures", parents=[common], help="write fig1b.csv, fig2.csv, fig3.csv with default grids")
    return parser


def _write(text: str, dest):
    if dest is None or dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def _fixed_params(cm) -> FixedParams:
    m = cm.model
    return FixedParams(gamma=m.optomech.gamma, n_th=m.optomech.n_th, g=m.g, kappa_a=m.kappa_a,
                       delta_a=m.delta_a, s0=cm.s0, xi=m.xi, r_plus=m.r_plus, phi=m.phi)


def cmd_spectrum(args, cm):
    lo, hi, n = args.omega
    omega = np.linspace(lo, hi, n)
    m = cm.model
    cols = {
        "omega": omega, "n_tilde": n_tilde(omega, m), "m_tilde": m_tilde(omega, m),
        "s_in": input_squeezing_spectrum(omega, m), "s_force": force_spectrum(omega, m),
    }
    buf = io.StringIO()
    if args.format == "csv":
        buf.write(",".join(cols) + "\n")
        for row in zip(*cols.values()):
            buf.write(",".join("%.12g" % v for v in row) + "\n")
    else:
        buf.write("".join(f"{k:>14}" for k in cols) + "\n")
        for row in zip(*cols.values()):
            buf.write("".join(f"{v:14.6g}" for v in row) + "\n")
    _write(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_cool(args, cm):
    rep = cooling_report(cm.model)
    if args.format == "csv":
        names = ("a_plus", "a_minus", "gamma_cool", "zeta", "n0", "n_a", "n_st", "cooperativity",
                 "n_st_approx", "detuning_warning", "weak_coupling_warning")
        text = "quantity,value\n" + "".join(
            f"{k},{getattr(rep, k) if isinstance(getattr(rep, k), bool) else '%.12g' % getattr(rep, k)}\n"
            for k in names)
    else:
        text = rep.summary() + "\n"
        if cm.note:
            text += f"note: {cm.note}\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_optimize(args, cm):
    m = cm.model
    opt = optimal_squeezing(cm.s0, m.xi, m.delta_a, m.kappa_a)
    try:
        det = optimize_detuning(m.kappa_a, cm.s0, m.xi, m.optomech.gamma, m.optomech.n_th, m.g,
                                window=args.window)
    except NoMinimumInWindow:
        det = None
    r_plus = opt.r_plus_matched if opt.r_plus_matched is not None else math.inf
    fields = {
        "phi_opt": opt.phi_opt, "phi_opt_over_pi": opt.phi_opt / math.pi, "feasible": opt.feasible,
        "r_plus_matched": r_plus, "s0": cm.s0, "s0_threshold": opt.s0_threshold,
        "n_a_predicted": opt.n_a_predicted,
        "delta_opt": det.delta_opt if det else math.nan, "n_st_min": det.n_st_min if det else math.nan,
    }
    if args.format == "csv":
        text = "quantity,value\n" + "".join(
            f"{k},{str(v).lower() if isinstance(v, bool) else '%.12g' % v}\n" for k, v in fields.items())
    else:
        text = (
            f"phi_opt        = {opt.phi_opt:.5f} rad ({opt.phi_opt / math.pi:.5f} pi)\n"
            f"feasible       = {str(opt.feasible).lower()}\n"
            f"r_plus         = {r_plus:.4f}\n"
            f"S(0) threshold = {opt.s0_threshold:.6g} (S(0) = {cm.s0:.6g})\n"
            f"N_a predicted  = {opt.n_a_predicted:.6g}\n"
        )
        if det:
            text += f"delta_opt      = {det.delta_opt:.6f} (N_st = {det.n_st_min:.6g})\n"
        else:
            text += f"delta_opt      = none in window {args.window}\n"
    _write(text, args.out)
    return EXIT_OK if opt.feasible else EXIT_INFEASIBLE


def cmd_sweep(args, cm):
    axes = tuple(args.axis) or tuple(DEFAULT_AXES[args.kind])
    fp = _fixed_params(cm)
    spec = SweepSpec(
        axes, fp,
        phase="optimal" if cm.phase_optimal else "fixed",
        bandwidth="fixed" if cm.matched is None else "matched",
        series=f"{args.kind}_xi={fp.xi:g}",
    )
    tables = [SWEEPS[args.kind](spec)]
    if args.kind == "cavity" and args.trace:
        kappa = next((a for a in axes if a.name == "kappa_a"), Axis("kappa_a", 0.05, 5.0, 201, log=True))
        tables.append(detuning_trace(kappa.values(), fp, f"trace_xi={fp.xi:g}"))
    if args.format == "csv":
        emit_csv(tables, args.out)
    else:
        if args.out:
            emit_csv(tables, args.out)
        for t in tables:
            i = int(np.argmin(t.columns["n_st"]))
            row = t.records()[i]
            print(f"{t.series}: {len(t)} points, min N_st = {row.n_st:.6g} at "
                  + ", ".join(f"{a.name}={getattr(row, a.name):.6g}" for a in axes))
    return EXIT_OK


def cmd_oracle_check(args, cm):
    m = cm.model
    lin = build_model(m)
    res = solve_steady_state(lin)
    analytic = steady_state(m)
    rel = abs(res.phonon_number - analytic) / analytic

    free = build_model(m.with_optomech(g=0.0))
    omega = np.linspace(-3, 3, 101)
    s_ref = force_spectrum(omega, m)
    s_orc = oracle_force_spectrum(omega, free)
    force_err = float(np.max(np.abs(s_orc - s_ref) / np.maximum(np.abs(s_ref), 1e-12)))
    sq_ref = input_squeezing_spectrum(omega, m)
    sq_err = float(np.max(np.abs(oracle_squeezing_spectrum(omega, m, free) - sq_ref) / sq_ref))

    fields = {
        "g": m.g, "n_st_analytic": analytic, "n_st_oracle": res.phonon_number, "relative_error": rel,
        "stability_margin": res.stability_margin, "lyapunov_residual": res.residual,
        "force_spectrum_max_rel_error": force_err, "squeezing_spectrum_max_rel_error": sq_err,
    }
    if args.export:
        export_matrices(lin, res, args.export)
    if args.format == "csv":
        text = "quantity,value\n" + "".join(f"{k},{'%.12g' % v}\n" for k, v in fields.items())
    else:
        text = (
            f"G                      = {m.g:.6g}\n"
            f"N_st analytic          = {analytic:.6g}\n"
            f"N_st oracle            = {res.phonon_number:.6g}\n"
            f"relative error         = {100 * rel:.3f} %\n"
            f"max Re(eigenvalue)     = {res.stability_margin:.3g}\n"
            f"Lyapunov residual      = {res.residual:.3g}\n"
            f"force spectrum (G=0)   max rel. error {force_err:.3g} on 101 points\n"
            f"input squeezing (G=0)  max rel. error {sq_err:.3g} on 101 points\n"
        )
    _write(text, args.out)
    return EXIT_OK


def cmd_figures(args, cm):
    out = Path(args.out or ".")
    sizes = write_figures(out)
    if args.format == "human":
        for name, size in sizes.items():
            print(f"wrote {out / name} ({size} bytes)")
    return EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum, "cool": cmd_cool, "optimize": cmd_optimize, "sweep": cmd_sweep,
    "oracle-check": cmd_oracle_check, "figures": cmd_figures,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = list(args.overrides)
    if getattr(args, "g", None) is not None:
        overrides.append(f"g={args.g}")
    try:
        cm = cfgmod.load(args.config, overrides)
        return COMMANDS[args.command](args, cm)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SqzCoolError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
