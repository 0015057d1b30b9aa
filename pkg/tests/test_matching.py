import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasematrix import models as M
from phasematrix.errors import GridError, InvalidParameterError, InvalidSpecError, SingularPointError, UnboundParameterError
from phasematrix.matching import (
    DimensionlessTISE,
    NondimensionalizationMap,
    admissible_morse_levels,
    diagnose_morse_branches,
    integrating_factor,
    matching_lhs,
    morse_template_parameters,
    verify_match,
    wavefunction_from_match,
)
from phasematrix.oracle import tise_residual_max
from phasematrix.phase_space import Grid
from phasematrix.templates import Family, PolynomialSpec, template_for, template_invariant


def zeros(x):
    return 0.0 * np.asarray(x, dtype=float)


HO = DimensionlessTISE(b=zeros, b_prime=zeros, v=lambda x: np.asarray(x, dtype=float) ** 2, domain=(-math.inf, math.inf))


# matching condition


def test_lhs_ho():
    assert matching_lhs(HO.bound(1.0), 0.5) == pytest.approx(0.75)
    assert matching_lhs(HO.bound(1.0), 0.5) == pytest.approx(template_invariant(Family.HERMITE, PolynomialSpec.hermite(0), 0.5))


def test_lhs_trivial():
    free = DimensionlessTISE(b=zeros, b_prime=zeros, v=zeros, domain=(0, 1), epsilon=0.0)
    assert matching_lhs(free, 0.3) == 0.0


def test_lhs_unbound_epsilon():
    with pytest.raises(UnboundParameterError):
        matching_lhs(HO, 0.5)


def test_lhs_hydrogen_equals_laguerre_G():
    for n in range(1, 5):
        for l in range(n):
            match = M.hydrogen_match(M.HydrogenParams(), n, l)
            rho = np.linspace(0.3, 40, 50)
            expected = -0.25 + n / rho - l * (l + 1) / rho**2
            np.testing.assert_allclose(matching_lhs(match.tise, rho), expected, rtol=1e-13)


# integrating factor


def test_integrating_factor_hermite():
    T = template_for(Family.HERMITE)
    spec = PolynomialSpec.hermite(2)
    for x in (-2.0, 0.5, 1.7):
        g = integrating_factor(lambda t: T.P(t, spec), lambda t: T.Q(t, spec), zeros, x)
        assert g == pytest.approx(math.exp(-x * x / 2), rel=1e-10)


def test_integrating_factor_polar_is_one():
    T = template_for(Family.POLAR_ASSOC_LEGENDRE)
    spec = PolynomialSpec.polar_assoc_legendre(2, 1)
    g = integrating_factor(lambda t: T.P(t, spec), lambda t: T.Q(t, spec), lambda t: -1 / math.tan(t), 2.0, x_ref=1.0)
    assert g == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("l", [0, 1, 2])
def test_integrating_factor_laguerre(l):
    T = template_for(Family.ASSOC_LAGUERRE)
    spec = PolynomialSpec.assoc_laguerre(1, 2 * l + 1)
    x_ref = 1.0
    for rho in (0.4, 3.0, 9.0):
        g = integrating_factor(lambda t: T.P(t, spec), lambda t: T.Q(t, spec), lambda t: -2.0 / t, rho, x_ref)
        expected = rho**l * math.exp(-rho / 2) / (x_ref**l * math.exp(-x_ref / 2))
        assert g == pytest.approx(expected, rel=1e-10)


def test_integrating_factor_closed_form():
    g = integrating_factor(None, None, None, 1.5, antiderivative=lambda x: -x * x / 2)
    assert g == pytest.approx(math.exp(-1.125))


def test_integrating_factor_singular_path():
    T = template_for(Family.ASSOC_LAGUERRE)
    spec = PolynomialSpec.assoc_laguerre(1, 1)
    with pytest.raises(SingularPointError):
        integrating_factor(lambda t: T.P(t, spec), lambda t: T.Q(t, spec), lambda t: -2.0 / t, -1.0, x_ref=1.0)


# verification


def test_verify_ho_exact():
    assert verify_match(HO.bound(5.0), Family.HERMITE, PolynomialSpec.hermite(2), Grid(-5, 5, 500)) < 1e-10


def test_verify_ho_wrong_energy():
    residual = verify_match(HO.bound(4.9), Family.HERMITE, PolynomialSpec.hermite(2), Grid(-5, 5, 500))
    assert residual == pytest.approx(0.1, abs=1e-12)


def test_verify_morse_exact():
    params = M.MorseParams.from_delta(5.0, 1.0)
    match = M.morse_match(params, 1)
    a, c = morse_template_parameters(5.0, match.epsilon)
    assert a == pytest.approx(-1.0)
    residual = verify_match(match.tise, Family.CONFLUENT_HYPERGEOMETRIC, PolynomialSpec.confluent(-1, c), Grid(0.1, 30.0, 1000))
    assert residual < 1e-9


def test_verify_rejects_singular_point_in_margin():
    tise = M.hydrogen_match(M.HydrogenParams(), 1, 0).tise
    with pytest.raises(GridError):
        verify_match(tise, Family.ASSOC_LAGUERRE, PolynomialSpec.assoc_laguerre(0, 1), Grid(0.001, 10.0, 100))


def test_verify_rejects_grid_outside_domain():
    with pytest.raises(GridError):
        verify_match(HO.bound(1.0), Family.ASSOC_LEGENDRE, PolynomialSpec.assoc_legendre(0, 0), Grid(-0.5, 2.0, 50))


# wavefunctions


def test_wavefunction_ho_ground():
    match = M.ho_match(M.HarmonicOscillatorParams(), 0)
    x = np.linspace(-3, 3, 13)
    np.testing.assert_allclose(wavefunction_from_match(match)(x), np.exp(-x * x / 2), rtol=1e-15)


def test_wavefunction_hydrogen_ground():
    match = M.hydrogen_match(M.HydrogenParams(), 1, 0)
    rho = np.linspace(0, 10, 11)
    np.testing.assert_allclose(wavefunction_from_match(match, PolynomialSpec.assoc_laguerre(0, 1))(rho), np.exp(-rho / 2))


def test_wavefunction_morse_ground():
    match = M.morse_match(M.MorseParams.from_delta(2.5, 1.0), 0)
    assert match.epsilon == pytest.approx(-4.0)
    y = np.linspace(0.1, 20, 30)
    np.testing.assert_allclose(wavefunction_from_match(match)(y), np.exp(-y / 2) * y**2.0, rtol=1e-13)


def test_wavefunction_inconsistent_spec():
    match = M.ho_match(M.HarmonicOscillatorParams(), 1)
    with pytest.raises(InvalidSpecError):
        wavefunction_from_match(match, PolynomialSpec.hermite(2))


# scales


def test_nondimensionalization_roundtrip():
    scale = NondimensionalizationMap.from_length(0.5, 2.0, 1.0)
    assert scale.a_energy == pytest.approx(1.0)
    assert scale.epsilon(scale.energy(3.7)) == pytest.approx(3.7)


def test_nondimensionalization_rejects_nonpositive():
    with pytest.raises(InvalidParameterError):
        NondimensionalizationMap(0.0, 1.0)


# Morse branches


def test_morse_branch_diagnosis():
    delta = 5.0
    for n in range(5):
        eps = -((delta - n - 0.5) ** 2)
        report = diagnose_morse_branches(delta, eps)
        assert report["retained"].admissible
        assert not report["rejected"].admissible
        assert "c =" in report["rejected"].reason or "a =" in report["rejected"].reason


def test_morse_levels_count():
    assert admissible_morse_levels(5.0) == [0, 1, 2, 3, 4]
    assert admissible_morse_levels(2.5) == [0, 1]
    assert admissible_morse_levels(0.4) == []


def test_morse_rejects_positive_energy():
    with pytest.raises(InvalidParameterError):
        morse_template_parameters(3.0, 0.5)


@settings(max_examples=100, deadline=None)
@given(delta=st.floats(0.6, 30.0))
def test_morse_retained_levels_are_bound_states(delta):
    levels = admissible_morse_levels(delta)
    assert levels == [n for n in range(int(delta) + 2) if n + 0.5 < delta]


@settings(max_examples=100, deadline=None)
@given(delta=st.floats(0.6, 30.0))
def test_morse_rejected_branch_is_nearly_empty(delta):
    # the other root only terminates with c > 0 if 0 < n + 1/2 - delta < 1/2
    levels = admissible_morse_levels(delta, "rejected")
    assert len(levels) <= 1
    for n in levels:
        assert delta - 0.5 < n < delta


@settings(max_examples=50, deadline=None)
@given(lam=st.integers(0, 10), x0=st.floats(-4, 0), width=st.floats(0.5, 6))
def test_ho_match_property(lam, x0, width):
    grid = Grid(x0, x0 + width, 64)
    assert verify_match(HO.bound(1.0 + 2 * lam), Family.HERMITE, PolynomialSpec.hermite(lam), grid) < 1e-10


# invariants over the four models


def _matches():
    for n in range(6):
        yield M.ho_match(M.HarmonicOscillatorParams(), n), lambda x, n=n: -x
    for l in range(5):
        for m in range(-l, l + 1):
            yield M.rotor_match(M.RigidRotorParams(), l, m), lambda t: 0.0 * t
    for n in range(1, 5):
        for l in range(n):
            yield M.hydrogen_match(M.HydrogenParams(), n, l), lambda r, l=l: l / r - 0.5
    for n in range(5):
        s = 5.0 - n - 0.5
        yield M.morse_match(M.MorseParams.from_delta(5.0), n), lambda y, s=s: s / y - 0.5


def test_substitution_property():
    for match, _ in _matches():
        lo, hi = match.verify_grid.x_min, match.verify_grid.x_max
        if match.template.family is Family.CONFLUENT_HYPERGEOMETRIC:
            # y^s with small s dominates the five-point truncation error near y = 0
            lo = 1.0
        grid = Grid(lo, hi, 1000)
        psi = wavefunction_from_match(match)
        scale = float(np.max(np.abs(psi(grid.points))))
        assert tise_residual_max(psi, match.tise, grid) < 1e-5 * scale, match.param_map


def test_integrating_factor_log_derivative():
    for match, dlog_g in _matches():
        T, spec, b = match.template, match.spec, match.tise.b
        x = np.linspace(match.verify_grid.x_min, match.verify_grid.x_max, 200)
        integrand = (T.Q(x, spec) + b(x) * T.P(x, spec)) / (2 * T.P(x, spec))
        np.testing.assert_allclose(dlog_g(x), integrand, rtol=1e-8, atol=1e-8)


def test_gauge_invariance():
    for match, _ in _matches():
        scaled = dataclasses.replace(match, g=lambda x, g=match.g: 7.5 * g(x))
        a = verify_match(match.tise, match.template, match.spec, match.verify_grid)
        b = verify_match(scaled.tise, scaled.template, scaled.spec, scaled.verify_grid)
        assert a == b
        x = np.linspace(match.verify_grid.x_min, match.verify_grid.x_max, 5)
        np.testing.assert_allclose(wavefunction_from_match(scaled)(x), 7.5 * wavefunction_from_match(match)(x))


def test_morse_count_grows_with_delta():
    counts = [len(admissible_morse_levels(d)) for d in (1.0, 2.5, 5.0, 10.0)]
    assert counts == sorted(counts)
    assert counts == [1, 2, 5, 10]
