"""
2x2 matrix form of linear second-order ODEs and its numerical integration.

A second-order equation P y'' + Q y' + R y = 0 is written as a first-order
system for the phase vector (y, y')::

    (y, y')' = D(x) (y, y')        D = [[0, 1], [-R/P, -Q/P]]

and the dimensionless Schrodinger equation -phi'' + b phi' + v phi = eps phi
as (phi, phi')' = A(x) (phi, phi') with A = [[0, 1], [-k^2, b]] and
k^2 = eps - v.  Writing phi = g f gives phi = B f with B = [[g, 0], [g', g]],
and f obeys f' = C f with C = B^-1 (A B - B').

Matrices are returned as plain ``(2, 2)`` float arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, NamedTuple, Optional, Union

import numpy as np

from .errors import (
    BracketError,
    ConvergenceError,
    GridError,
    IntegrationError,
    NearSingularError,
    SingularCoefficientError,
    ZeroIntegratingFactorError,
)

__all__ = [
    "PhaseVector",
    "Grid",
    "PhaseTrajectory",
    "build_template_matrix",
    "build_tise_matrix",
    "build_product_matrix",
    "build_product_matrix_derivative",
    "build_reduced_matrix",
    "reduced_matrix_residual",
    "integrate_phase_space",
    "shoot_eigenvalue",
]

DET_THRESHOLD = 1e-14
RENORMALIZE_ABOVE = 1e6

Symmetry = Literal["even", "odd", "none"]


class PhaseVector(NamedTuple):
    value: float
    slope: float


@dataclass(frozen=True)
class Grid:
    """Uniform grid of ``n_points`` nodes on ``[x_min, x_max]``."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise GridError(f"grid bounds must be finite, got [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise GridError(f"grid needs an integer n_points >= 3, got {self.n_points}")
        if not self.x_min < self.x_max:
            raise GridError(f"grid requires x_min < x_max, got [{self.x_min}, {self.x_max}]")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    def refined(self) -> "Grid":
        """Same interval with the spacing halved."""
        return Grid(self.x_min, self.x_max, 2 * self.n_points - 1)


@dataclass(frozen=True)
class PhaseTrajectory:
    """Sampled solution of the phase-space system.

    When the integration was renormalized, the true solution at node i is
    ``values[i] * exp(log_scale[i])`` (same for slopes).
    """

    grid: Grid
    values: np.ndarray
    slopes: np.ndarray
    log_scale: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.n_points or len(self.slopes) != self.grid.n_points:
            raise GridError("trajectory length must equal grid.n_points")

    @property
    def samples(self) -> list[PhaseVector]:
        return [PhaseVector(float(u), float(w)) for u, w in zip(self.values, self.slopes)]

    @property
    def final(self) -> PhaseVector:
        return PhaseVector(float(self.values[-1]), float(self.slopes[-1]))

    def unscaled(self) -> tuple[np.ndarray, np.ndarray]:
        factor = np.exp(self.log_scale)
        return self.values * factor, self.slopes * factor


def _matrix(a11, a12, a21, a22) -> np.ndarray:
    m = np.array([[a11, a12], [a21, a22]], dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError(f"non-finite matrix entries: {m.tolist()}")
    return m


def build_template_matrix(P: float, Q: float, R: float) -> np.ndarray:
    """Phase-space matrix of ``P y'' + Q y' + R y = 0`` at one point."""
    if P == 0:
        raise SingularCoefficientError("P = 0: the template ODE has a singular point here")
    return _matrix(0.0, 1.0, -R / P, -Q / P)


def build_tise_matrix(b: float, k_squared: float) -> np.ndarray:
    return _matrix(0.0, 1.0, -k_squared, b)


def build_product_matrix(g: float, g_prime: float) -> np.ndarray:
    """Matrix mapping (f, f') to (g f, (g f)')."""
    return _matrix(g, 0.0, g_prime, g)


def build_product_matrix_derivative(g_prime: float, g_double_prime: float) -> np.ndarray:
    return _matrix(g_prime, 0.0, g_double_prime, g_prime)


def build_reduced_matrix(g, g_prime, g_double_prime, b, k_squared) -> np.ndarray:
    """Closed form of ``B^-1 (A B - B')`` for the factor ``phi = g f``."""
    if g == 0:
        raise ZeroIntegratingFactorError("integrating factor g vanishes")
    return _matrix(
        0.0,
        1.0,
        -(g * k_squared - b * g_prime + g_double_prime) / g,
        b - 2.0 * g_prime / g,
    )


def reduced_matrix_residual(A, B, B_prime, C, det_threshold: float = DET_THRESHOLD) -> float:
    """Max-abs entry of ``B^-1 (A B - B') - C``."""
    A, B, B_prime, C = (np.asarray(m, dtype=float) for m in (A, B, B_prime, C))
    det = B[0, 0] * B[1, 1] - B[0, 1] * B[1, 0]
    if abs(det) < det_threshold:
        raise NearSingularError(f"|det B| = {abs(det):.3e} below threshold {det_threshold:g}")
    B_inv = np.array([[B[1, 1], -B[0, 1]], [-B[1, 0], B[0, 0]]]) / det
    return float(np.max(np.abs(B_inv @ (A @ B - B_prime) - C)))


def _sample(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on an array, falling back to pointwise calls."""
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(f(x), dtype=float)
        if out.shape == x.shape:
            return out
        if out.ndim == 0:
            return np.full_like(x, float(out))
    except (TypeError, ValueError):
        pass
    with np.errstate(all="ignore"):
        return np.array([float(f(xi)) for xi in x])


def _check_finite(arr: np.ndarray, x: np.ndarray, name: str) -> None:
    bad = ~np.isfinite(arr)
    if bad.any():
        pos = float(x[np.argmax(bad)])
        raise IntegrationError(f"{name} is not finite at x = {pos:g}", position=pos)


def _coefficients(b, k_squared, grid: Grid):
    x = grid.points
    mid = x[:-1] + 0.5 * grid.h
    out = []
    for name, f in (("b", b), ("k^2", k_squared)):
        node_vals, mid_vals = _sample(f, x), _sample(f, mid)
        _check_finite(node_vals, x, name)
        _check_finite(mid_vals, mid, name)
        out.append((node_vals.tolist(), mid_vals.tolist()))
    return out


def _rk4(b_vals, k2_vals, u, w, h, renormalize_above):
    (b_n, b_m), (k_n, k_m) = b_vals, k2_vals
    n = len(b_n)
    values = [0.0] * n
    slopes = [0.0] * n
    logs = [0.0] * n
    values[0], slopes[0] = u, w
    log_acc = 0.0
    half = 0.5 * h
    for i in range(n - 1):
        b0, k0 = b_n[i], k_n[i]
        bm, km = b_m[i], k_m[i]
        b1, k1 = b_n[i + 1], k_n[i + 1]
        du1 = w
        dw1 = b0 * w - k0 * u
        u2 = u + half * du1
        w2 = w + half * dw1
        du2 = w2
        dw2 = bm * w2 - km * u2
        u3 = u + half * du2
        w3 = w + half * dw2
        du3 = w3
        dw3 = bm * w3 - km * u3
        u4 = u + h * du3
        w4 = w + h * dw3
        du4 = w4
        dw4 = b1 * w4 - k1 * u4
        u += h * (du1 + 2.0 * du2 + 2.0 * du3 + du4) / 6.0
        w += h * (dw1 + 2.0 * dw2 + 2.0 * dw3 + dw4) / 6.0
        if renormalize_above is not None:
            norm = math.hypot(u, w)
            if norm > renormalize_above:
                u /= norm
                w /= norm
                log_acc += math.log(norm)
        values[i + 1], slopes[i + 1], logs[i + 1] = u, w, log_acc
    return values, slopes, logs


def integrate_phase_space(
    b: Callable,
    k_squared: Callable,
    initial: PhaseVector,
    grid: Grid,
    renormalize_above: Optional[float] = None,
) -> PhaseTrajectory:
    """Integrate ``(phi, phi')' = A(x) (phi, phi')`` with fixed-step RK4.

    ``b`` and ``k_squared`` are callables of x; array-aware callables are
    evaluated in one shot.  With ``renormalize_above`` set, the phase vector
    is rescaled whenever its norm exceeds that value and the accumulated
    log factor is kept in the trajectory.
    """
    u, w = float(initial[0]), float(initial[1])
    if not (math.isfinite(u) and math.isfinite(w)):
        raise IntegrationError("initial phase vector is not finite", position=grid.x_min)
    b_vals, k_vals = _coefficients(b, k_squared, grid)
    values, slopes, logs = _rk4(b_vals, k_vals, u, w, grid.h, renormalize_above)
    return PhaseTrajectory(grid, np.array(values), np.array(slopes), np.array(logs))


InitialData = Union[PhaseVector, Callable[[float], PhaseVector], None]


def _launch(symmetry: Symmetry) -> PhaseVector:
    if symmetry == "even":
        return PhaseVector(1.0, 0.0)
    if symmetry in ("odd", "none"):
        return PhaseVector(0.0, 1.0)
    raise ValueError(f"unknown symmetry {symmetry!r}")


def shoot_eigenvalue(
    b: Callable,
    k_squared_of: Callable[[float], Callable],
    bracket: tuple[float, float],
    grid: Grid,
    symmetry: Symmetry = "none",
    *,
    initial: InitialData = None,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> float:
    """Bisect on the energy until the trajectory value at ``grid.x_max`` vanishes.

    The trajectory is launched at ``grid.x_min`` with (1, 0) for even states
    and (0, 1) for odd states or a left Dirichlet wall.  ``initial`` overrides
    the launch data; it may depend on the trial energy.
    """
    b_vals = None

    def boundary(eps: float) -> float:
        nonlocal b_vals
        start = _launch(symmetry) if initial is None else (initial(eps) if callable(initial) else initial)
        x = grid.points
        mid = x[:-1] + 0.5 * grid.h
        if b_vals is None:
            bn, bm = _sample(b, x), _sample(b, mid)
            _check_finite(bn, x, "b")
            _check_finite(bm, mid, "b")
            b_vals = (bn.tolist(), bm.tolist())
        k2 = k_squared_of(eps)
        kn, km = _sample(k2, x), _sample(k2, mid)
        _check_finite(kn, x, "k^2")
        _check_finite(km, mid, "k^2")
        values, _, _ = _rk4(b_vals, (kn.tolist(), km.tolist()), float(start[0]), float(start[1]), grid.h, RENORMALIZE_ABOVE)
        return values[-1]

    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise BracketError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
    f_lo, f_hi = boundary(lo), boundary(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(f"boundary value does not change sign over ({lo}, {hi})")
    for _ in range(max_iter):
        if hi - lo <= tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        f_mid = boundary(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection did not reach tol={tol:g} in {max_iter} iterations")
