"""
Matching a dimensionless Schrodinger equation to a template ODE.

For ``-phi'' + b phi' + v phi = eps w phi`` (``w`` is 1 except after a
coordinate change such as the Morse one) set ``k^2 = eps w - v``.  The
factorization ``phi = g p`` turns the equation into the template
``P p'' + Q p' + R p = 0`` exactly when

    k^2 + b'/2 - b^2/4 = G(x)                       (matching condition)
    g = exp( integral (Q + b P) / (2 P) dx )         (integrating factor)

Identifying the coefficients on both sides of the matching condition fixes
the length scale, the quantized energy and the template parameters; that
step is done per model in :mod:`phasematrix.models`.  Here live the generic
pieces: the two sides of the condition, the integrating factor, a grid
verifier for any proposed identification and the resulting wavefunction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Literal, Mapping, Optional

import numpy as np
from scipy import integrate

from .errors import GridError, InvalidParameterError, InvalidSpecError, SingularPointError, UnboundParameterError
from .phase_space import Grid
from .templates import PolynomialSpec, TemplateODE, eval_polynomial, template_for, template_invariant

__all__ = [
    "DimensionlessTISE",
    "NondimensionalizationMap",
    "MatchSolution",
    "matching_lhs",
    "integrating_factor",
    "verify_match",
    "wavefunction_from_match",
    "MorseBranchReport",
    "morse_template_parameters",
    "diagnose_morse_branches",
    "admissible_morse_levels",
]

SINGULAR_MARGIN = 1e-3


def _one(x):
    return np.ones_like(x, dtype=float) if np.ndim(x) else 1.0


@dataclass(frozen=True)
class DimensionlessTISE:
    """``-phi'' + b phi' + v phi = eps * weight * phi`` on ``domain``.

    ``weight`` defaults to 1, which is the plain dimensionless equation with
    ``k^2 = eps - v``.  ``epsilon`` may be left unbound while the equation
    is used as a family over energies.
    """

    b: Callable
    b_prime: Callable
    v: Callable
    domain: tuple[float, float]
    epsilon: Optional[float] = None
    weight: Callable = _one
    singular_points: tuple[float, ...] = ()

    def bound(self, epsilon: float) -> "DimensionlessTISE":
        return replace(self, epsilon=float(epsilon))

    def k_squared(self, x):
        if self.epsilon is None:
            raise UnboundParameterError("the dimensionless energy epsilon is not bound")
        return self.epsilon * self.weight(x) - self.v(x)

    def k_squared_of(self, epsilon: float) -> Callable:
        return lambda x: epsilon * self.weight(x) - self.v(x)


@dataclass(frozen=True)
class NondimensionalizationMap:
    """Length scale ``x_c`` and energy scale ``a = hbar^2 / (2 m x_c^2)``."""

    x_c: float
    a_energy: float

    def __post_init__(self):
        if not (self.x_c > 0 and self.a_energy > 0):
            raise InvalidParameterError(f"scales must be positive: x_c={self.x_c}, a={self.a_energy}")

    @classmethod
    def from_length(cls, x_c: float, mass: float, hbar: float = 1.0) -> "NondimensionalizationMap":
        return cls(x_c, hbar**2 / (2.0 * mass * x_c**2))

    def energy(self, epsilon):
        return epsilon * self.a_energy

    def epsilon(self, energy):
        return energy / self.a_energy


@dataclass(frozen=True)
class MatchSolution:
    """A verified identification of one state with a template polynomial.

    ``to_dimensionless`` maps the physical coordinate to the template
    variable (``q / x_c`` for most models, the exponential variable for
    Morse); ``g`` is the integrating factor in the template variable.
    """

    template: TemplateODE
    spec: PolynomialSpec
    tise: DimensionlessTISE
    param_map: Mapping[str, float]
    scale: NondimensionalizationMap
    energy: float
    energy_of: Callable[..., float]
    g: Callable
    to_dimensionless: Callable
    verify_grid: Grid = field(repr=False, default=None)

    @property
    def epsilon(self) -> float:
        return self.tise.epsilon


def matching_lhs(tise: DimensionlessTISE, x):
    """Left side of the matching condition, ``k^2 + b'/2 - b^2/4``."""
    with np.errstate(divide="ignore", invalid="ignore"):
        b = tise.b(x)
        return tise.k_squared(x) + 0.5 * tise.b_prime(x) - 0.25 * b * b


def integrating_factor(
    P: Callable,
    Q: Callable,
    b: Callable,
    x: float,
    x_ref: float = 0.0,
    antiderivative: Optional[Callable] = None,
) -> float:
    """``g(x) = exp(int_{x_ref}^x (Q + b P) / (2 P))`` normalized to ``g(x_ref) = 1``.

    With ``antiderivative`` (a primitive of the integrand) the closed form is
    used; otherwise the integral is done by adaptive quadrature after
    checking that P does not vanish between ``x_ref`` and ``x``.
    """
    if antiderivative is not None:
        return math.exp(antiderivative(x) - antiderivative(x_ref))
    path = np.linspace(min(x, x_ref), max(x, x_ref), 257)
    with np.errstate(all="ignore"):
        p_path = np.array([float(P(t)) for t in path])
    if np.any(~np.isfinite(p_path)) or np.any(p_path == 0.0) or np.any(np.sign(p_path) != np.sign(p_path[0])):
        raise SingularPointError(f"P vanishes on the path from {x_ref} to {x}")

    def integrand(t):
        p = P(t)
        return (Q(t) + b(t) * p) / (2.0 * p)

    value, _ = integrate.quad(integrand, x_ref, x, limit=200, epsabs=1e-13, epsrel=1e-12)
    return math.exp(value)


def verify_match(
    tise: DimensionlessTISE,
    template,
    spec: PolynomialSpec,
    grid: Grid,
    margin: float = SINGULAR_MARGIN,
) -> float:
    """Max over the grid of ``|k^2 + b'/2 - b^2/4 - G(x)|``.

    Singular points of either side must stay ``margin * grid.width`` away
    from the grid.
    """
    template = template if isinstance(template, TemplateODE) else template_for(template)
    lo, hi = template.domain
    if grid.x_min < lo or grid.x_max > hi:
        raise GridError(f"grid [{grid.x_min}, {grid.x_max}] leaves the template domain [{lo}, {hi}]")
    gap = margin * grid.width
    for s in tuple(template.singular_points) + tuple(tise.singular_points):
        if grid.x_min - gap <= s <= grid.x_max + gap:
            raise GridError(f"singular point {s} lies within the margin of the grid")
    x = grid.points
    return float(np.max(np.abs(matching_lhs(tise, x) - template_invariant(template, spec, x))))


def wavefunction_from_match(solution: MatchSolution, spec: Optional[PolynomialSpec] = None) -> Callable:
    """Unnormalized ``x -> g(x) p(x)`` in the template variable."""
    if spec is None:
        spec = solution.spec
    elif spec != solution.spec:
        raise InvalidSpecError(f"{spec} is inconsistent with the match ({solution.spec})")
    g = solution.g

    def psi(x):
        return g(x) * eval_polynomial(spec, x)

    return psi


# Morse branch selection -------------------------------------------------------

Branch = Literal["retained", "rejected"]


@dataclass(frozen=True)
class MorseBranchReport:
    branch: str
    a: float
    c: float
    a_nonpositive_integer: bool
    c_positive: bool

    @property
    def admissible(self) -> bool:
        return self.a_nonpositive_integer and self.c_positive

    @property
    def reason(self) -> str:
        if self.admissible:
            return "terminating series: a is a non-positive integer and c > 0"
        problems = []
        if not self.a_nonpositive_integer:
            problems.append(f"a = {self.a:.6g} is not a non-positive integer")
        if not self.c_positive:
            problems.append(f"c = {self.c:.6g} is not positive")
        return "; ".join(problems)


def morse_template_parameters(delta: float, epsilon: float, branch: Branch = "retained") -> tuple[float, float]:
    """``(a, c)`` of the confluent template for a Morse energy ``epsilon < 0``.

    Both roots of the quadratic solve the matching condition; ``retained``
    is ``a = 1/2 - delta + s, c = 1 + 2 s`` with ``s = sqrt(-epsilon)``.
    """
    if epsilon > 0:
        raise InvalidParameterError(f"Morse matching needs epsilon <= 0, got {epsilon}")
    s = math.sqrt(-epsilon)
    if branch == "retained":
        return 0.5 - delta + s, 1.0 + 2.0 * s
    if branch == "rejected":
        return 0.5 - delta - s, 1.0 - 2.0 * s
    raise ValueError(f"unknown branch {branch!r}")


def diagnose_morse_branches(delta: float, epsilon: float, tol: float = 1e-9) -> dict[str, MorseBranchReport]:
    """Admissibility of both roots, for inspecting why one is discarded."""
    out = {}
    for branch in ("retained", "rejected"):
        a, c = morse_template_parameters(delta, epsilon, branch)
        out[branch] = MorseBranchReport(
            branch=branch,
            a=a,
            c=c,
            a_nonpositive_integer=a <= tol and abs(a - round(a)) <= tol,
            c_positive=c > 0,
        )
    return out


def admissible_morse_levels(delta: float, branch: Branch = "retained") -> list[int]:
    """Integers n >= 0 giving a terminating series with c > 0 on ``branch``.

    On the retained root ``a = -n`` forces ``s = delta - n - 1/2``; on the
    rejected root ``s = n + 1/2 - delta``.  ``s`` must be positive for a
    normalizable state.
    """
    levels = []
    for n in range(int(math.ceil(delta)) + 2):
        s = delta - n - 0.5 if branch == "retained" else n + 0.5 - delta
        if s <= 0:
            continue
        a, c = morse_template_parameters(delta, -s * s, branch)
        if c > 0 and abs(a + n) < 1e-9:
            levels.append(n)
    return levels
