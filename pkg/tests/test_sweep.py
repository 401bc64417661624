import hashlib
import math

import numpy as np
import pytest

from sqzcool.errors import DomainError, EmptyInput
from sqzcool.optimizer import optimal_phase
from sqzcool.sweep import (COLUMNS, Axis, FixedParams, SweepSpec, SweepTable, detuning_trace,
                           emit_csv, figure_1b, figure_2, figure_3, render_csv, run_sweep,
                           sweep_cavity, sweep_phase, sweep_squeezing, thread_count)

PHI_OPT = optimal_phase(1.0, 1.0)


def test_axis_values_and_validation():
    assert Axis("kappa_a", 0.1, 10.0, 3, log=True).values() == pytest.approx([0.1, 1.0, 10.0])
    with pytest.raises(DomainError):
        Axis("bogus", 0, 1, 3)
    with pytest.raises(DomainError):
        Axis("phi", 1, 0, 3)
    with pytest.raises(DomainError):
        Axis("s0", 0, 1, 3, log=True)
    with pytest.raises(DomainError):
        SweepSpec((Axis("phi", 0, 1, 3), Axis("phi", 0, 2, 3)))


def test_three_point_phase_sweep_csv():
    table = sweep_phase(SweepSpec((Axis("phi", 0.0, 3.0, 3),)))
    text = render_csv([table])
    lines = text.splitlines()
    assert len(lines) == 4
    assert lines[0] == ",".join(COLUMNS)


def test_empty_records_rejected():
    with pytest.raises(EmptyInput):
        render_csv([])
    with pytest.raises(EmptyInput):
        render_csv([SweepTable("x", {c: np.array([]) for c in COLUMNS[1:]})])


def test_reference_points():
    table = sweep_phase(SweepSpec((Axis("phi", PHI_OPT, PHI_OPT + math.pi, 2),)))
    np.testing.assert_allclose(table.columns["n_st"], 2e-4 / 0.0160002, atol=1e-9)
    vac = sweep_phase(SweepSpec((Axis("phi", 0.0, math.pi, 9),), FixedParams(xi=0.0)))
    np.testing.assert_allclose(vac.columns["n_st"], (2e-4 + 0.016 * 0.25) / 0.0160002, rtol=1e-10)


def test_squeezing_sweep_points():
    fixed = FixedParams()
    pt = sweep_squeezing(SweepSpec((Axis("s0", 0.3, 0.5, 2), Axis("r_plus", 2.7462, 3.0, 2)), fixed))
    rec = pt.records()[0]
    assert (rec.s0, rec.r_plus) == (0.3, 2.7462)
    # r_+ quoted to four places, so the Stokes rate is cancelled only to ~1e-4 relative
    assert rec.n_st == pytest.approx(0.0125, abs=2e-6)
    matched = run_sweep(SweepSpec((Axis("s0", 0.3, 0.5, 2),), fixed))
    feasible = matched.columns["feasible"]
    assert feasible.tolist() == [True, False]
    assert math.isinf(matched.columns["r_plus"][1])
    none = sweep_squeezing(SweepSpec((Axis("s0", 0.5, 1.0, 2), Axis("r_plus", 1.0, 9.0, 3)), fixed))
    no_sq = none.columns["n_st"][none.columns["s0"] == 1.0]
    np.testing.assert_allclose(no_sq, (2e-4 + 0.016 * 0.25) / 0.0160002, rtol=1e-10)


def test_cavity_sweep_points():
    spec = SweepSpec((Axis("kappa_a", 1.0, 2.0, 2), Axis("delta_a", 1.0, 2.0, 2)))
    assert sweep_cavity(spec).columns["n_st"][0] == pytest.approx(2e-4 / 0.0160002, abs=1e-9)
    vac = sweep_cavity(SweepSpec(spec.axes, FixedParams(xi=0.0)))
    assert vac.columns["n_st"][0] == pytest.approx(0.0042 / 0.0160002, rel=1e-10)
    # resolved sideband: the optical bath contributes kappa^2/4
    rs = sweep_cavity(SweepSpec((Axis("kappa_a", 0.05, 0.1, 2), Axis("delta_a", 1.0, 2.0, 2)), FixedParams(xi=0.0)))
    rec = rs.records()[0]
    assert rec.n_a == pytest.approx(6.25e-4, rel=1e-12)


def test_sweep_kind_checks():
    with pytest.raises(DomainError):
        sweep_phase(SweepSpec((Axis("s0", 0.3, 0.5, 2),)))
    with pytest.raises(DomainError):
        sweep_cavity(SweepSpec((Axis("phi", 0, 1, 2),)))


def test_thread_count_independent(monkeypatch):
    spec = SweepSpec((Axis("kappa_a", 0.05, 5.0, 80, log=True), Axis("delta_a", 0.2, 3.0, 80)))
    one = render_csv([run_sweep(spec, threads=1)])
    many = render_csv([run_sweep(spec, threads=4)])
    assert one == many
    monkeypatch.setenv("SQZCOOL_THREADS", "3")
    assert thread_count() == 3


def test_detuning_trace_threads():
    kappas = np.geomspace(0.05, 5.0, 9)
    a = detuning_trace(kappas, FixedParams(), "t", threads=1)
    b = detuning_trace(kappas, FixedParams(), "t", threads=3)
    assert render_csv([a]) == render_csv([b])
    assert np.all(np.diff(a.columns["n_st"]) > 0)


def test_emit_csv_file_and_stdout(tmp_path, capsysbinary):
    table = sweep_phase(SweepSpec((Axis("phi", 0.0, 3.0, 3),)))
    n = emit_csv(table, tmp_path / "x.csv")
    assert n == (tmp_path / "x.csv").stat().st_size
    emit_csv([table], "-")
    assert capsysbinary.readouterr().out == (tmp_path / "x.csv").read_bytes()
    with pytest.raises(OSError):
        emit_csv(table, tmp_path / "missing" / "x.csv")


def test_figure_phase_trace():
    tables = {t.series: t for t in figure_1b()}
    assert set(tables) == {"phase_xi=1", "phase_xi=0.8", "phase_xi=0"}
    t1 = tables["phase_xi=1"]
    phi, n = t1.columns["phi"], t1.columns["n_st"]
    assert len(phi) == 721
    assert n.min() == pytest.approx(0.0125, abs=1e-4)
    step = phi[1] - phi[0]
    first, second = np.argmin(n[phi < math.pi]), np.argmin(np.where(phi >= math.pi, n, np.inf))
    assert abs(phi[first] - PHI_OPT) <= step
    assert abs(phi[second] - PHI_OPT - math.pi) <= step
    flat = tables["phase_xi=0"].columns["n_st"]
    assert flat.max() - flat.min() < 1e-12
    assert flat[0] == pytest.approx(0.2625, abs=1e-4)


def test_figure_grids_shapes():
    f2 = {t.series: t for t in figure_2(points=11)}
    assert len(f2["grid_xi=1"]) == 121
    assert f2["matched_xi=0.8"].columns["s0"].min() >= 0.2
    f3 = {t.series: t for t in figure_3(points=11)}
    assert len(f3["grid_xi=1"]) == 121 and len(f3["trace_xi=0"]) == 11


def test_repeated_runs_byte_identical():
    digest = [hashlib.sha256(render_csv(figure_3(points=21)).encode()).hexdigest() for _ in range(2)]
    assert digest[0] == digest[1]
