import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasematrix.errors import (
    BracketError,
    GridError,
    IntegrationError,
    NearSingularError,
    SingularCoefficientError,
    ZeroIntegratingFactorError,
)
from phasematrix.phase_space import (
    Grid,
    PhaseVector,
    build_product_matrix,
    build_product_matrix_derivative,
    build_reduced_matrix,
    build_template_matrix,
    build_tise_matrix,
    integrate_phase_space,
    reduced_matrix_residual,
    shoot_eigenvalue,
)


def ho_k2(eps):
    return lambda x: eps - x * x


def zero(x):
    return 0.0 * x


# grid


def test_grid_refined_halves_spacing():
    g = Grid(-1.0, 1.0, 11)
    assert g.refined().n_points == 21
    assert g.refined().h == pytest.approx(g.h / 2)


@pytest.mark.parametrize("args", [(1.0, 1.0, 10), (0.0, 1.0, 2), (0.0, math.inf, 10), (2.0, 1.0, 10), (0.0, 1.0, 10.5)])
def test_grid_rejects_invalid(args):
    with pytest.raises(GridError):
        Grid(*args)


# matrix builders


def test_template_matrix_hermite_origin():
    np.testing.assert_array_equal(build_template_matrix(1, 0, 2), [[0, 1], [-2, 0]])


def test_template_matrix_hermite_at_one():
    np.testing.assert_array_equal(build_template_matrix(1, -2, 4), [[0, 1], [-4, 2]])


def test_template_matrix_singular_coefficient():
    with pytest.raises(SingularCoefficientError):
        build_template_matrix(0, 1, 1)


def test_template_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        build_template_matrix(1, math.nan, 1)


@pytest.mark.parametrize(
    "b,k2,expected",
    [(0, 1, [[0, 1], [-1, 0]]), (-2, -0.25, [[0, 1], [0.25, -2]])],
)
def test_tise_matrix(b, k2, expected):
    np.testing.assert_array_equal(build_tise_matrix(b, k2), expected)


def test_tise_matrix_ho_ground_state_origin():
    eps, x = 1.0, 0.0
    np.testing.assert_array_equal(build_tise_matrix(0.0, eps - x * x), [[0, 1], [-1, 0]])


def test_reduced_matrix_identity_factor_is_tise_matrix():
    np.testing.assert_array_equal(build_reduced_matrix(1, 0, 0, 0, 4), [[0, 1], [-4, 0]])


def test_reduced_matrix_ho_equals_hermite_template():
    lam = 1
    # g = exp(-x^2/2) at x = 0: g = 1, g' = 0, g'' = -1; k^2 = 1 + 2 lam at x = 0
    C = build_reduced_matrix(1.0, 0.0, -1.0, 0.0, 1.0 + 2 * lam)
    np.testing.assert_allclose(C, [[0, 1], [-2, 0]], atol=1e-15)
    np.testing.assert_allclose(C, build_template_matrix(1.0, 0.0, 2.0 * lam), atol=1e-15)


def test_reduced_matrix_zero_factor():
    with pytest.raises(ZeroIntegratingFactorError):
        build_reduced_matrix(0.0, 1.0, 1.0, 0.0, 1.0)


def _ho_blocks(x, lam):
    g = math.exp(-x * x / 2)
    gp, gpp = -x * g, (x * x - 1) * g
    k2 = 1 + 2 * lam - x * x
    A = build_tise_matrix(0.0, k2)
    B = build_product_matrix(g, gp)
    Bp = build_product_matrix_derivative(gp, gpp)
    return A, B, Bp, build_reduced_matrix(g, gp, gpp, 0.0, k2)


def test_reduced_residual_ho_consistent():
    A, B, Bp, C = _ho_blocks(0.7, 2)
    assert reduced_matrix_residual(A, B, Bp, C) < 1e-12


def test_reduced_matrix_ho_equals_hermite_everywhere():
    lam = 3
    for x in np.linspace(-3, 3, 13):
        _, _, _, C = _ho_blocks(x, lam)
        np.testing.assert_allclose(C, build_template_matrix(1.0, -2 * x, 2.0 * lam), atol=1e-12)


def test_reduced_residual_identity_case():
    A = build_tise_matrix(0.3, 1.7)
    assert reduced_matrix_residual(A, np.eye(2), np.zeros((2, 2)), A) == 0.0


def test_reduced_residual_constructed_offset():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(2, 2))
    C = A + np.array([[0.0, 0.0], [1.0, 0.0]])
    assert reduced_matrix_residual(A, np.eye(2), np.zeros((2, 2)), C) == pytest.approx(1.0)


def test_reduced_residual_near_singular():
    A = build_tise_matrix(0.0, 1.0)
    with pytest.raises(NearSingularError):
        reduced_matrix_residual(A, build_product_matrix(1e-8, 1.0), np.zeros((2, 2)), A)


finite = st.floats(-5, 5, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(
    g=st.floats(0.1, 10).flatmap(lambda m: st.sampled_from([m, -m])),
    gp=finite,
    gpp=finite,
    b=finite,
    k2=finite,
)
def test_reduced_matrix_is_conjugated_tise_matrix(g, gp, gpp, b, k2):
    A = build_tise_matrix(b, k2)
    B = build_product_matrix(g, gp)
    Bp = build_product_matrix_derivative(gp, gpp)
    C = build_reduced_matrix(g, gp, gpp, b, k2)
    assert reduced_matrix_residual(A, B, Bp, C) < 1e-10 * max(1.0, abs(gp / g) ** 2 + abs(gpp / g) + abs(b) + abs(k2))


@settings(max_examples=100, deadline=None)
@given(g=st.floats(0.2, 5), gp=finite, b=finite, k2=finite)
def test_reduced_matrix_first_row_is_shift(g, gp, b, k2):
    C = build_reduced_matrix(g, gp, 0.0, b, k2)
    assert C[0, 0] == 0.0 and C[0, 1] == 1.0


# integration


def test_integrate_ho_ground_state_decays():
    traj = integrate_phase_space(zero, ho_k2(1.0), PhaseVector(1.0, 0.0), Grid(0.0, 6.0, 2400))
    # the decaying solution is unstable against the growing one, so step errors
    # are amplified by up to exp(x^2/2); measured |value(6)| is about 2e-6 here
    assert abs(traj.values[-1]) < 5e-6
    exact = np.exp(-traj.grid.points**2 / 2)
    np.testing.assert_allclose(traj.values, exact, atol=5e-6)
    x = traj.grid.points
    assert np.all(np.diff(traj.values[(x > 1.0) & (x < 5.0)]) < 0)


def test_integrate_ho_ground_state_tail_on_finer_grid():
    traj = integrate_phase_space(zero, ho_k2(1.0), PhaseVector(1.0, 0.0), Grid(0.0, 6.0, 4800))
    assert abs(traj.values[-1]) < 1e-6
    traj = integrate_phase_space(zero, ho_k2(1.0), PhaseVector(1.0, 0.0), Grid(0.0, 6.0, 9600))
    beyond = traj.values[traj.grid.points > 1.0]
    assert np.all(np.diff(beyond) < 0)


def test_integrate_rk4_fourth_order():
    # y'' = -y from (0, 1): y = sin x
    errors = []
    for n in (101, 201):
        traj = integrate_phase_space(zero, lambda x: 1.0 + 0.0 * x, PhaseVector(0.0, 1.0), Grid(0.0, 10.0, n))
        errors.append(np.max(np.abs(traj.values - np.sin(traj.grid.points))))
    assert errors[0] / errors[1] >= 12


def test_integrate_exponential():
    traj = integrate_phase_space(zero, lambda x: -1.0 + 0.0 * x, PhaseVector(1.0, 1.0), Grid(0.0, 1.0, 1001))
    np.testing.assert_allclose(traj.values, np.exp(traj.grid.points), atol=1e-8)
    np.testing.assert_allclose(traj.slopes, np.exp(traj.grid.points), atol=1e-8)


def test_integrate_non_eigenvalue_diverges():
    traj = integrate_phase_space(zero, ho_k2(2.0), PhaseVector(1.0, 0.0), Grid(0.0, 6.0, 2400))
    assert abs(traj.values[-1]) > 1e2


def test_integrate_scalar_only_coefficients():
    traj = integrate_phase_space(lambda x: 0.0, lambda x: math.cos(x) * 0 - 1.0, PhaseVector(1.0, 1.0), Grid(0.0, 1.0, 101))
    assert traj.final.value == pytest.approx(math.e, abs=1e-8)


def test_integrate_reports_failure_position():
    def k2(x):
        return 1.0 / (x - 0.5)

    with pytest.raises(IntegrationError) as info:
        integrate_phase_space(zero, k2, PhaseVector(1.0, 0.0), Grid(0.0, 1.0, 11))
    assert info.value.position == pytest.approx(0.5)


def test_integrate_renormalization_preserves_solution():
    grid = Grid(0.0, 10.0, 2001)
    plain = integrate_phase_space(zero, lambda x: -4.0 + 0.0 * x, PhaseVector(1.0, 2.0), grid)
    scaled = integrate_phase_space(zero, lambda x: -4.0 + 0.0 * x, PhaseVector(1.0, 2.0), grid, renormalize_above=1e3)
    assert np.max(np.abs(scaled.values)) <= 1e3 * 1.01
    values, slopes = scaled.unscaled()
    np.testing.assert_allclose(values, plain.values, rtol=1e-10)
    np.testing.assert_allclose(slopes, plain.slopes, rtol=1e-10)


def test_trajectory_samples_are_phase_vectors():
    traj = integrate_phase_space(zero, ho_k2(1.0), PhaseVector(1.0, 0.0), Grid(0.0, 1.0, 5))
    assert len(traj.samples) == 5
    assert traj.samples[0] == PhaseVector(1.0, 0.0)


# shooting


def test_shoot_ho_even_ground_state():
    eps = shoot_eigenvalue(zero, ho_k2, (0.5, 1.5), Grid(0.0, 8.0, 3200), "even")
    assert eps == pytest.approx(1.0, abs=1e-6)


def test_shoot_ho_odd_first_excited():
    eps = shoot_eigenvalue(zero, ho_k2, (2.5, 3.5), Grid(0.0, 8.0, 3200), "odd")
    assert eps == pytest.approx(3.0, abs=1e-6)


def test_shoot_bracket_without_even_state():
    with pytest.raises(BracketError):
        shoot_eigenvalue(zero, ho_k2, (1.2, 1.8), Grid(0.0, 8.0, 3200), "even")


def test_shoot_box_with_explicit_initial_data():
    eps = shoot_eigenvalue(zero, lambda e: (lambda x: e + 0.0 * x), (0.5, 1.5), Grid(0.0, math.pi, 2001), initial=PhaseVector(0.0, 1.0))
    assert eps == pytest.approx(1.0, abs=1e-7)


@settings(max_examples=30, deadline=None)
@given(c=st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3), u=finite, w=finite)
def test_integration_is_linear(c, u, w):
    grid = Grid(-2.0, 3.0, 301)
    base = integrate_phase_space(zero, ho_k2(2.3), PhaseVector(u, w), grid)
    scaled = integrate_phase_space(zero, ho_k2(2.3), PhaseVector(c * u, c * w), grid)
    np.testing.assert_allclose(scaled.values, c * base.values, rtol=1e-12, atol=1e-12 * abs(c) * np.max(np.abs(base.values)))
    np.testing.assert_allclose(scaled.slopes, c * base.slopes, rtol=1e-12, atol=1e-12 * abs(c) * np.max(np.abs(base.slopes)))


@pytest.mark.parametrize("n", range(6))
def test_shoot_ho_levels(n):
    eps = shoot_eigenvalue(zero, ho_k2, (2 * n + 0.5, 2 * n + 1.5), Grid(0.0, 8.0, 3200), "even" if n % 2 == 0 else "odd")
    assert eps == pytest.approx(1.0 + 2 * n, abs=1e-6)
