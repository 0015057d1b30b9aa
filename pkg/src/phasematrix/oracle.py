"""
Brute-force numerical reference, independent of the matching machinery.

Nothing here knows about template ODEs or the matching condition: the
eigenvalues come from a finite-difference Hamiltonian diagonalized by
Sturm-sequence bisection, norms and overlaps from Simpson's rule, and
eigenfunction checks from plain central differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .errors import DegenerateStateError, GridError, InvalidParameterError
from .phase_space import Grid

__all__ = [
    "TridiagonalSymmetric",
    "NumericalSpectrumReport",
    "build_fd_hamiltonian",
    "build_conservative_fd_hamiltonian",
    "sturm_count",
    "eigenvalues_sturm",
    "fd_spectrum",
    "conservative_fd_spectrum",
    "quadrature",
    "gram_matrix",
    "tise_residual_max",
    "count_nodes",
]

NODE_THRESHOLD = 1e-9
_PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class TridiagonalSymmetric:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(e) != max(len(d) - 1, 0) or len(d) == 0:
            raise InvalidParameterError(f"inconsistent tridiagonal lengths {len(d)} and {len(e)}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise GridError("tridiagonal matrix has non-finite entries")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def dimension(self) -> int:
        return len(self.diagonal)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros_like(self.diagonal)
        r[:-1] += np.abs(self.off_diagonal)
        r[1:] += np.abs(self.off_diagonal)
        return float(np.min(self.diagonal - r)), float(np.max(self.diagonal + r))


@dataclass(frozen=True)
class NumericalSpectrumReport:
    """Lowest eigenvalues of a discretized operator.

    ``eigenvalues`` are Richardson-extrapolated from the base grid and the
    grid with half the spacing; ``coarse`` and ``fine`` keep the raw values.
    ``convergence_estimate`` is the largest ``|fine - coarse|``.
    """

    eigenvalues: np.ndarray
    coarse: np.ndarray
    fine: np.ndarray
    grid: Grid
    boundary_condition: str
    convergence_estimate: float

    def scaled(self, factor: float, shift: float = 0.0) -> "NumericalSpectrumReport":
        """Same report with every eigenvalue mapped to ``factor * e + shift``."""
        return NumericalSpectrumReport(
            factor * self.eigenvalues + shift,
            factor * self.coarse + shift,
            factor * self.fine + shift,
            self.grid,
            self.boundary_condition,
            abs(factor) * self.convergence_estimate,
        )


def _finite_samples(f: Callable, x: np.ndarray, name: str) -> np.ndarray:
    with np.errstate(all="ignore"):
        out = np.asarray(f(x), dtype=float)
    if out.shape != x.shape:
        out = np.broadcast_to(out, x.shape).astype(float)
    if not np.all(np.isfinite(out)):
        bad = float(x[np.argmax(~np.isfinite(out))])
        raise GridError(f"{name} is not finite on the grid (x = {bad:g})")
    return out


def _derivative(f: Callable, x: np.ndarray, step: float = 1e-4) -> np.ndarray:
    h = step * np.maximum(1.0, np.abs(x))
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def build_fd_hamiltonian(
    v: Callable,
    grid: Grid,
    first_derivative_b: Optional[Callable] = None,
    b_prime: Optional[Callable] = None,
) -> TridiagonalSymmetric:
    """Three-point discretization of ``-u'' + v u`` with Dirichlet ends.

    Unknowns live on the interior nodes.  A first-derivative term
    ``b u'`` is removed beforehand by the Liouville substitution
    ``phi = exp(int b/2) u``, which replaces v with ``v - b'/2 + b^2/4``;
    ``b_prime`` defaults to a five-point numerical derivative of b.
    """
    x = grid.points[1:-1]
    pot = _finite_samples(v, x, "v")
    if first_derivative_b is not None:
        b = _finite_samples(first_derivative_b, x, "b")
        db = _finite_samples(b_prime, x, "b'") if b_prime is not None else _derivative(first_derivative_b, x)
        pot = pot - 0.5 * db + 0.25 * b * b
    inv_h2 = 1.0 / grid.h**2
    return TridiagonalSymmetric(2.0 * inv_h2 + pot, np.full(len(x) - 1, -inv_h2))


def build_conservative_fd_hamiltonian(stiffness: Callable, v: Callable, grid: Grid) -> TridiagonalSymmetric:
    """Cell-centred discretization of ``-(p u')' + v u`` with zero flux at both ends.

    ``grid`` gives the cell faces; unknowns sit at the ``n_points - 1``
    cell centres, so v is never evaluated at the end points.  Suited to
    operators whose stiffness vanishes at the boundary.
    """
    faces = grid.points
    centres = 0.5 * (faces[:-1] + faces[1:])
    p = _finite_samples(stiffness, faces, "p")
    p[0] = p[-1] = 0.0
    pot = _finite_samples(v, centres, "v")
    inv_h2 = 1.0 / grid.h**2
    return TridiagonalSymmetric((p[:-1] + p[1:]) * inv_h2 + pot, -p[1:-1] * inv_h2)


def sturm_count(matrix: TridiagonalSymmetric, shift: float) -> int:
    """Number of eigenvalues strictly below ``shift``."""
    return _count(matrix.diagonal.tolist(), _squared_off(matrix), shift)


def _squared_off(matrix: TridiagonalSymmetric) -> list:
    return [0.0] + (matrix.off_diagonal**2).tolist()


def _count(d: list, e2: list, shift: float) -> int:
    # negative pivots of the LDL^T factorization of T - shift I
    negatives = 0
    q = 1.0
    for di, ei in zip(d, e2):
        q = di - shift - ei / q
        if q < 0.0:
            negatives += 1
        elif q == 0.0:
            q = _PIVOT_FLOOR
    return negatives


def eigenvalues_sturm(
    matrix: TridiagonalSymmetric,
    count: int,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-12,
) -> np.ndarray:
    """Lowest ``count`` eigenvalues by Sturm-sequence bisection.

    Each eigenvalue is bracketed to ``max(abs_tol, rel_tol * |lambda|)``.
    Every sign count refines the brackets of all requested eigenvalues.
    """
    if not 1 <= count <= matrix.dimension:
        raise InvalidParameterError(f"count must be in [1, {matrix.dimension}], got {count}")
    d = matrix.diagonal.tolist()
    e2 = _squared_off(matrix)
    g_lo, g_hi = matrix.gershgorin()
    lows = [g_lo] * count
    highs = [g_hi] * count

    def record(shift: float, c: int) -> None:
        for j in range(count):
            if c >= j + 1:
                highs[j] = min(highs[j], shift)
            else:
                lows[j] = max(lows[j], shift)

    # expand from the bottom of the spectrum instead of bisecting the whole Gershgorin range
    width = max(1.0, 1e-6 * (g_hi - g_lo))
    while g_lo + width < highs[-1]:
        shift = g_lo + width
        c = _count(d, e2, shift)
        record(shift, c)
        if c >= count:
            break
        width *= 4.0

    out = np.empty(count)
    for k in range(count):
        lo, hi = max(lows[k], out[k - 1] if k else lows[k]), highs[k]
        while hi - lo > max(abs_tol, rel_tol * max(abs(lo), abs(hi))):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            c = _count(d, e2, mid)
            record(mid, c)
            lo, hi = max(lo, lows[k]), highs[k]
        out[k] = 0.5 * (lo + hi)
    return out


def _richardson(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    return (4.0 * fine - coarse) / 3.0


def fd_spectrum(
    v: Callable,
    grid: Grid,
    count: int,
    first_derivative_b: Optional[Callable] = None,
    b_prime: Optional[Callable] = None,
) -> NumericalSpectrumReport:
    """Lowest eigenvalues of ``-phi'' + b phi' + v phi`` on ``grid`` and on the refined grid."""
    coarse = eigenvalues_sturm(build_fd_hamiltonian(v, grid, first_derivative_b, b_prime), count)
    fine_grid = grid.refined()
    fine = eigenvalues_sturm(build_fd_hamiltonian(v, fine_grid, first_derivative_b, b_prime), count)
    return NumericalSpectrumReport(
        _richardson(coarse, fine), coarse, fine, grid, "dirichlet_both", float(np.max(np.abs(fine - coarse)))
    )


def conservative_fd_spectrum(stiffness: Callable, v: Callable, grid: Grid, count: int) -> NumericalSpectrumReport:
    coarse = eigenvalues_sturm(build_conservative_fd_hamiltonian(stiffness, v, grid), count)
    fine = eigenvalues_sturm(build_conservative_fd_hamiltonian(stiffness, v, grid.refined()), count)
    return NumericalSpectrumReport(
        _richardson(coarse, fine), coarse, fine, grid, "natural_both", float(np.max(np.abs(fine - coarse)))
    )


def quadrature(f: Callable, grid: Grid, weight: Optional[Callable] = None) -> float:
    """Composite Simpson rule for ``int f(x) weight(x) dx`` over the grid."""
    if grid.n_points % 2 == 0:
        raise GridError(f"Simpson's rule needs an odd number of points, got {grid.n_points}")
    x = grid.points
    with np.errstate(all="ignore"):
        y = np.asarray(f(x), dtype=float) * np.ones_like(x)
        if weight is not None:
            y = y * np.asarray(weight(x), dtype=float)
    if not np.all(np.isfinite(y)):
        raise GridError("integrand is not finite on the grid")
    return float(grid.h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def gram_matrix(states: Sequence[Callable], grid: Grid, weight: Optional[Callable] = None) -> np.ndarray:
    """Normalized overlaps ``<psi_i, psi_j> / (|psi_i| |psi_j|)``."""
    n = len(states)
    raw = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            raw[i, j] = raw[j, i] = quadrature(lambda x: states[i](x) * states[j](x), grid, weight)
    norms = np.sqrt(np.diag(raw))
    if np.any(~(norms > 0)):
        raise DegenerateStateError("a state has zero norm on the grid")
    return raw / np.outer(norms, norms)


def tise_residual_max(psi: Callable, tise, grid: Grid) -> float:
    """Scaled max of ``|-phi'' + b phi' + v phi - eps w phi|`` on the grid interior.

    Derivatives are five-point central differences; the two outermost nodes
    on each side are skipped and the result is divided by ``max |phi|``.
    """
    for s in tise.singular_points:
        if grid.x_min <= s <= grid.x_max:
            raise GridError(f"singular point {s} lies inside the grid")
    x = grid.points
    h = grid.h
    phi = np.asarray(psi(x), dtype=float)
    d1 = (phi[:-4] - 8 * phi[1:-3] + 8 * phi[3:-1] - phi[4:]) / (12 * h)
    d2 = (-phi[:-4] + 16 * phi[1:-3] - 30 * phi[2:-2] + 16 * phi[3:-1] - phi[4:]) / (12 * h * h)
    xi = x[2:-2]
    mid = phi[2:-2]
    residual = -d2 + tise.b(xi) * d1 + (tise.v(xi) - tise.epsilon * tise.weight(xi)) * mid
    scale = np.max(np.abs(phi))
    if not scale > 0:
        raise DegenerateStateError("wavefunction vanishes on the grid")
    return float(np.max(np.abs(residual)) / scale)


def count_nodes(samples, threshold: float = NODE_THRESHOLD) -> int:
    """Sign changes among samples above ``threshold * max |sample|``."""
    s = np.asarray(samples, dtype=float)
    if not np.all(np.isfinite(s)):
        raise GridError("samples must be finite")
    peak = np.max(np.abs(s)) if s.size else 0.0
    kept = s[np.abs(s) > threshold * peak] if peak > 0 else s[:0]
    if kept.size == 0:
        raise DegenerateStateError("all samples are below the node threshold")
    signs = np.sign(kept)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))
