import math

import pytest
from hypothesis import given, strategies as st

from sqzcool.errors import (DomainError, Infeasible, NegativeInput, NonPositiveRate,
                            ThresholdViolation, ValidationError)
from sqzcool.params import (OptomechParams, SqueezerParams, canonical_phase, from_observables,
                            loss_factor, normalize, split_cavity, squeezed_model, validate)
from sqzcool.spectra import input_squeezing_spectrum


def test_validate_derives_rates():
    m = validate(OptomechParams(), SqueezerParams(chi=0.6210, kappa_c_s=2.1252))
    assert m.xi == 1.0
    assert m.r_plus == pytest.approx(2.7462, abs=1e-12)
    assert m.r_minus == pytest.approx(1.5042, abs=1e-12)


def test_zero_gain_has_equal_decay_rates():
    m = validate(OptomechParams(kappa_a_s=0.7, kappa_a_loss=0.3), SqueezerParams(kappa_c_s=1.5, kappa_c_loss=0.5))
    assert m.r_plus == m.r_minus == 2.0
    assert m.xi == pytest.approx(0.7 * 0.75)


@pytest.mark.parametrize("sq, exc", [
    (SqueezerParams(chi=1.0, kappa_c_s=1.0), ThresholdViolation),
    (SqueezerParams(chi=-0.1), NegativeInput),
    (SqueezerParams(kappa_c_s=0.0), NonPositiveRate),
    (SqueezerParams(kappa_c_s=1.0, kappa_c_loss=-0.5), NegativeInput),
    (SqueezerParams(chi=math.nan), ValidationError),
])
def test_squeezer_violations(sq, exc):
    with pytest.raises(exc):
        validate(OptomechParams(), sq)


@pytest.mark.parametrize("om, exc", [
    (OptomechParams(gamma=0.0), NonPositiveRate),
    (OptomechParams(omega_m=-1.0), NonPositiveRate),
    (OptomechParams(n_th=-1.0), NegativeInput),
    (OptomechParams(g=-0.1), NegativeInput),
    (OptomechParams(kappa_a_s=0.0, kappa_a_loss=0.0), NonPositiveRate),
    (OptomechParams(delta_a=math.inf), ValidationError),
])
def test_optomech_violations(om, exc):
    with pytest.raises(exc):
        validate(om, SqueezerParams())


def test_validation_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate(OptomechParams(gamma=-1), SqueezerParams())


@pytest.mark.parametrize("rates, xi", [((1, 0, 2, 0), 1.0), ((0, 1, 2, 0), 0.0), ((0.8, 0.2, 1, 0), 0.8)])
def test_loss_factor_examples(rates, xi):
    assert loss_factor(*rates) == pytest.approx(xi)


def test_loss_factor_requires_positive_totals():
    with pytest.raises(NonPositiveRate):
        loss_factor(1, 0, 0, 0)


@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0), st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_loss_factor_in_unit_interval(a, b, c, d):
    if a + b <= 0 or c + d <= 0:
        return
    assert 0.0 <= loss_factor(a, b, c, d) <= 1.0


def test_from_observables_no_squeezing():
    sq = from_observables(1.0, 3.0, 1.0)
    assert sq.chi == 0.0
    assert sq.kappa_c == pytest.approx(3.0)


def test_from_observables_exact_case():
    sq = from_observables(1 / 9, 3.0, 1.0)
    assert sq.chi == pytest.approx(1.0, rel=1e-12)
    assert sq.kappa_c == pytest.approx(2.0, rel=1e-12)


def test_from_observables_reference_case_round_trips():
    sq = from_observables(0.3, 2.7462, 1.0)
    assert sq.chi == pytest.approx(0.6210, abs=5e-4)
    assert sq.kappa_c == pytest.approx(2.1252, abs=5e-4)
    m = validate(OptomechParams(), sq)
    assert float(input_squeezing_spectrum(0.0, m)) == pytest.approx(0.3, abs=1e-10)


@given(s0=st.floats(0.01, 1.0), r_plus=st.floats(0.1, 50.0), xi=st.floats(0.05, 1.0))
def test_from_observables_forward_consistency(s0, r_plus, xi):
    if (1 - s0) / xi >= 1 - 1e-9:
        with pytest.raises(Infeasible):
            from_observables(s0, r_plus, xi)
        return
    sq = from_observables(s0, r_plus, xi)
    assert sq.chi < sq.kappa_c
    assert sq.chi + sq.kappa_c == pytest.approx(r_plus, rel=1e-12)
    ks, kl = split_cavity(1.0, xi)
    m = validate(OptomechParams(kappa_a_s=ks, kappa_a_loss=kl), sq)
    assert float(input_squeezing_spectrum(0.0, m)) == pytest.approx(s0, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("s0, xi", [(0.1, 0.8), (0.5, 0.5), (0.0, 1.0)])
def test_from_observables_rejects(s0, xi):
    with pytest.raises((Infeasible, DomainError)):
        from_observables(s0, 2.0, xi)


def test_from_observables_domain():
    with pytest.raises(DomainError):
        from_observables(0.5, -1.0, 1.0)
    with pytest.raises(DomainError):
        from_observables(0.5, 1.0, 0.0)


def test_squeezed_model_vacuum_purity_ignores_s0():
    m = squeezed_model(OptomechParams(), 0.3, 2.0, 0.0, xi=0.0)
    assert m.chi == 0.0 and m.xi == 0.0


def test_squeezed_model_splits_cavity():
    m = squeezed_model(OptomechParams(kappa_a_s=2.0), 0.5, 2.0, 0.0, xi=0.8)
    assert m.kappa_a == pytest.approx(2.0)
    assert m.xi == pytest.approx(0.8)


@given(st.floats(-50, 50))
def test_canonical_phase_range(phi):
    p = canonical_phase(phi)
    assert 0.0 <= p < math.pi
    assert math.sin(2 * p) == pytest.approx(math.sin(2 * phi), abs=1e-9)
    assert math.cos(2 * p) == pytest.approx(math.cos(2 * phi), abs=1e-9)


def test_normalize_rescales_rates():
    om, sq = normalize(OptomechParams(omega_m=2.0, gamma=4e-7, kappa_a_s=2.0, delta_a=2.0, g=0.2),
                       SqueezerParams(chi=1.0, kappa_c_s=4.0, phi=0.3))
    assert (om.omega_m, om.gamma, om.kappa_a_s, om.delta_a, om.g) == (1.0, 2e-7, 1.0, 1.0, 0.1)
    assert (sq.chi, sq.kappa_c_s, sq.phi) == (0.5, 2.0, 0.3)


def test_with_helpers_revalidate():
    m = validate(OptomechParams(), SqueezerParams(chi=0.5))
    with pytest.raises(ThresholdViolation):
        m.with_squeezer(chi=1.0)
    assert m.with_optomech(g=0.0).g == 0.0
